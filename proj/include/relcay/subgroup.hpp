#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "relcay/detail/lattice.hpp"
#include "relcay/group_model.hpp"
#include "relcay/word.hpp"

namespace relcay {

  enum class MembershipMode { StallingsFolding, BoundedSearch };

  struct SubgroupSpec {
    // Words over the marked alphabet.
    std::vector<Word> generators;
    MembershipMode    mode  = MembershipMode::StallingsFolding;
    std::size_t       limit = 0;  // BoundedSearch only
  };

  enum class Answer { Inside, Outside, Unknown };

  std::string_view to_string(Answer answer);

  struct MembershipVerdict {
    Answer answer = Answer::Unknown;
    // Over the subgroup generators: Letter(i, inverted) stands for g_i^(+-1).
    std::optional<Word> certificate;
    std::size_t         search_bound = 0;

    bool inside() const noexcept {
      return answer == Answer::Inside;
    }
  };

  // Folded core graph of a subgroup of a free group, with each edge also
  // labelled by a word over the subgroup generators so that reading a loop
  // at the base yields a certificate.
  class FoldedGraph {
   public:
    struct HalfEdge {
      std::size_t target;
      Word        phi;
    };

    FoldedGraph() = default;
    // Words over the free basis; rank is the number of basis letters.
    FoldedGraph(std::vector<Word> const& generators, std::size_t rank);

    std::size_t vertex_count() const noexcept {
      return _next.size();
    }
    std::size_t edge_count() const noexcept;
    // Vertex 0 is the base; vertices are numbered in shortlex BFS order.
    HalfEdge const* step(std::size_t vertex, Letter x) const;

    struct Trace {
      std::size_t vertex;
      std::size_t consumed;
      Word        phi;
    };
    // Follows the freely reduced word from the base as far as edges allow.
    Trace trace(std::span<Letter const> w) const;

    // Graph distance inside the core.
    std::size_t distance(std::size_t u, std::size_t v) const;
    // Shortlex-least geodesic word from the base to vertex v.
    Word const& path_to(std::size_t v) const {
      return _path.at(v);
    }

   private:
    std::size_t                                _rank = 0;
    std::vector<std::vector<std::optional<HalfEdge>>> _next;
    std::vector<std::vector<std::size_t>>      _distance;
    std::vector<Word>                          _path;
  };

  class Subgroup {
   public:
    // Throws ModeUnsupported for StallingsFolding on a non-free backend and
    // ValidationError for a malformed spec.
    Subgroup(GroupModel const& model, SubgroupSpec spec,
             std::size_t budget = kDefaultBudget);

    GroupModel const& model() const noexcept {
      return *_model;
    }
    SubgroupSpec const& spec() const noexcept {
      return _spec;
    }
    // Generator words over the presentation generators.
    std::vector<Word> const& basis_generators() const noexcept {
      return _basis;
    }
    bool trivial() const noexcept {
      return _trivial;
    }
    // Every verdict is Inside or Outside.
    bool exact() const noexcept;
    FoldedGraph const* core() const noexcept {
      return _core ? &*_core : nullptr;
    }

    MembershipVerdict contains(std::span<Letter const> w) const;
    // Same, for a word over the presentation generators.
    MembershipVerdict contains_basis(std::span<Letter const> generator_word) const;

    // Word over the marked alphabet for a certificate.
    Word expand(std::span<Letter const> certificate) const;
    std::string certificate_string(std::span<Letter const> certificate) const;

    // Invariant of the element modulo the image of H (equal for equal cosets).
    detail::IntVector coset_invariant(std::span<Letter const> generator_word) const;

    // Canonical coset key when one exists (Stallings, abelian, table, H = 1
    // with canonical forms).
    std::optional<Word> canonical_key(std::span<Letter const> generator_word) const;

   private:
    GroupModel const*          _model;
    SubgroupSpec               _spec;
    std::vector<Word>          _basis;
    bool                       _trivial = true;
    std::optional<FoldedGraph> _core;
    detail::Lattice            _invariants;
    detail::Lattice            _exponents;  // abelian backend
    // Table backend: elements of H with certificates.
    std::vector<std::optional<Word>> _table_members;
    // Bounded search: products of at most limit generators.
    std::shared_ptr<detail::ElementIndex> _products;
    std::vector<Word>                     _product_certificates;
  };

  // Identifies right cosets Hg (Hg1 = Hg2 iff g1 g2^-1 in H) for elements
  // given as words over the presentation generators.
  class CosetIndex {
   public:
    explicit CosetIndex(Subgroup const& subgroup);

    std::optional<std::size_t> find(std::span<Letter const> generator_word);
    void insert(std::span<Letter const> generator_word, std::size_t id);
    // False once an Unknown verdict kept two words apart.
    bool certified() const noexcept {
      return _certified;
    }

   private:
    Subgroup const*                                   _subgroup;
    bool                                              _canonical;
    bool                                              _certified = true;
    std::unordered_map<Word, std::size_t, WordHash>   _by_key;
    std::unique_ptr<detail::ElementIndex>             _elements;
    std::unordered_map<detail::IntVector,
                       std::vector<std::pair<Word, std::size_t>>,
                       detail::IntVectorHash>
        _buckets;
  };

  // Shortlex-least word over the marked alphabet of minimal length in the
  // coset H w.
  Word coset_min_rep(Subgroup const& subgroup, std::span<Letter const> w,
                     std::size_t budget = kDefaultBudget);

  struct QuasiconvexityReport {
    std::size_t radius_scanned = 0;
    std::size_t E_emp          = 0;
    std::size_t pairs_scanned  = 0;
    bool        certified      = true;
    // Geodesic realizing the maximum, from witness_source to
    // witness_target, and the vertex on it farthest from H.
    Word witness_source, witness_target, witness_vertex;
  };

  struct DefectReport {
    std::size_t radius_scanned = 0;
    std::size_t K_emp          = 0;
    std::size_t hausdorff_emp  = 0;
    std::size_t pairs_scanned  = 0;
    bool        certified      = true;
    Word        witness_h, witness_g;
  };

  QuasiconvexityReport estimate_E(Subgroup const& subgroup, std::size_t radius,
                                  std::size_t budget = kDefaultBudget);
  DefectReport estimate_K(Subgroup const& subgroup, std::size_t radius,
                          std::size_t budget = kDefaultBudget);

}  // namespace relcay
