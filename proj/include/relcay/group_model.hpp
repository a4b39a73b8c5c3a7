#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relcay/detail/lattice.hpp"
#include "relcay/word.hpp"

namespace relcay {

  // Maximum number of distinct elements (or cosets) any single enumeration
  // may hold before giving up with BallExhausted.
  inline constexpr std::size_t kDefaultBudget = 4'000'000;

  enum class Backend { FreeReduction, DehnAlgorithm, AbelianNormalForm, FiniteTable };

  std::string_view to_string(Backend backend);

  struct MultiplicationTable {
    std::size_t order = 0;
    // products[i * order + j] is the index of i * j. Element 0 is the identity.
    std::vector<std::uint32_t> products;
    // Table element represented by each presentation generator.
    std::vector<std::uint32_t> images;
  };

  // Everything a spec file declares about a group.
  struct Presentation {
    std::string       name;
    Alphabet          generators;
    std::vector<Word> relators;
    Backend           backend = Backend::FreeReduction;
    // Extra alphabet symbols and the generator words they stand for. The
    // marked alphabet is the generators (mapped to themselves) followed by
    // these symbols, so pi may be non-injective or hit the identity.
    std::vector<std::pair<char, Word>> marking;
    // Trusted, never verified: enables the Dehn backend.
    bool                               small_cancellation = false;
    std::optional<MultiplicationTable> table;
  };

  namespace detail {

    // Word problem on words over the presentation generators.
    class WordProblem {
     public:
      virtual ~WordProblem() = default;
      // Canonical representative when canonical() holds, otherwise a reduced
      // word equal in the group.
      virtual Word reduce(std::span<Letter const> w) const = 0;
      virtual bool canonical() const noexcept = 0;
      virtual bool is_trivial(std::span<Letter const> w) const {
        return reduce(w).empty();
      }
    };

  }  // namespace detail

  class GroupModel;

  // An element stored by its normal form over the presentation generators:
  // the backend canonical form, or for the Dehn backend the shortlex-least
  // geodesic word.
  class GroupElement {
   public:
    GroupElement(Word normal_form, GroupModel const& model)
        : _normal_form(std::move(normal_form)), _model(&model) {}

    Word const& normal_form() const noexcept {
      return _normal_form;
    }
    GroupModel const& model() const noexcept {
      return *_model;
    }
    bool operator==(GroupElement const& that) const {
      return _model == that._model && _normal_form == that._normal_form;
    }

   private:
    Word              _normal_form;
    GroupModel const* _model;
  };

  struct BallEntry {
    GroupElement element;
    // Shortlex-least geodesic word over the marked alphabet.
    Word        word;
    std::size_t length;
  };

  class GroupModel {
   public:
    // Validates the backend-specific invariants; throws ValidationError.
    explicit GroupModel(Presentation presentation);

    Presentation const& presentation() const noexcept {
      return _presentation;
    }
    std::string const& name() const noexcept {
      return _presentation.name;
    }
    Backend backend() const noexcept {
      return _presentation.backend;
    }
    // Presentation generators.
    Alphabet const& generators() const noexcept {
      return _presentation.generators;
    }
    // The marked generating set A.
    Alphabet const& alphabet() const noexcept {
      return _alphabet;
    }
    std::size_t k() const noexcept {
      return _alphabet.size();
    }
    bool identity_marking() const noexcept {
      return _presentation.marking.empty();
    }
    // Word over the generators standing for each letter of A.
    Word const& image(std::size_t letter) const {
      return _images.at(letter);
    }

    // pi applied letterwise, freely reduced.
    Word evaluate(std::span<Letter const> w) const;
    // Backend reduction of evaluate(w).
    Word reduce(std::span<Letter const> w) const;

    // Whether reduce() yields unique representatives.
    bool canonical_forms() const noexcept {
      return _solver->canonical();
    }
    // Whether reduce() already yields shortlex-least geodesic words of
    // Gamma(G, A), making geodesic_length a length lookup.
    bool geodesic_forms() const noexcept;

    // Throws DehnNotApplicable when the Dehn backend lacks the small
    // cancellation declaration.
    bool is_trivial(std::span<Letter const> w) const;
    bool equal(std::span<Letter const> u, std::span<Letter const> v) const;

    GroupElement element(std::span<Letter const> w,
                         std::size_t budget = kDefaultBudget) const;

    std::size_t geodesic_length(std::span<Letter const> w,
                                std::size_t budget = kDefaultBudget) const;
    // Shortlex-least word over A of length |w|_X representing w.
    Word geodesic_word(std::span<Letter const> w,
                       std::size_t budget = kDefaultBudget) const;

    // Elements of length at most radius, sorted shortlex by normal form.
    std::vector<BallEntry> ball(std::size_t radius,
                                std::size_t budget = kDefaultBudget) const;
    // Sphere sizes 0..radius without materialising elements beyond the
    // enumeration itself.
    std::vector<std::size_t> sphere_sizes(std::size_t radius,
                                          std::size_t budget = kDefaultBudget) const;

    // Values of homomorphisms G -> Z (exponent-sum functionals vanishing on
    // every relator) and, when all relators have even length, the parity of
    // the length. Equal elements have equal invariants.
    detail::IntVector invariant(std::span<Letter const> w) const;
    detail::IntVector invariant_of_generator_word(std::span<Letter const> w) const;

    detail::WordProblem const& solver() const noexcept {
      return *_solver;
    }
    // Table element represented by a word over the generators
    // (FiniteTable only).
    std::uint32_t table_element(std::span<Letter const> generator_word) const;
    std::uint32_t table_multiply(std::uint32_t x, std::uint32_t y) const;
    // Whether invariant() ends with a length-parity entry.
    bool parity_invariant() const noexcept {
      return _parity_invariant;
    }
    // Steps of the marked alphabet as generator words.
    std::vector<Word> const& steps() const noexcept {
      return _images;
    }
    // Steps of the generators themselves.
    std::vector<Word> basis_steps() const;

   private:
    void check_dehn() const;

    Presentation                               _presentation;
    Alphabet                                   _alphabet;
    std::vector<Word>                          _images;
    std::shared_ptr<detail::WordProblem const> _solver;
    std::vector<detail::IntVector>             _functionals;
    bool                                       _parity_invariant = false;
  };

  namespace detail {

    struct IntVectorHash {
      std::size_t operator()(IntVector const& v) const noexcept;
    };

    // Assigns dense ids to group elements given as words over the
    // presentation generators. Exact for every backend: canonical backends
    // key on normal forms, the Dehn backend buckets by invariant() and
    // confirms candidates with the exact triviality test.
    class ElementIndex {
     public:
      explicit ElementIndex(GroupModel const& model);

      std::optional<std::size_t> find(std::span<Letter const> generator_word) const;
      void insert(std::span<Letter const> generator_word, std::size_t id);
      std::size_t size() const noexcept {
        return _size;
      }

     private:
      GroupModel const*                                     _model;
      std::unordered_map<Word, std::size_t, WordHash>       _by_form;
      std::unordered_map<IntVector,
                         std::vector<std::pair<Word, std::size_t>>,
                         IntVectorHash>
                  _buckets;
      std::size_t _size = 0;
    };

    // Breadth-first enumeration of the Cayley graph whose edges multiply on
    // the right by steps[i] and steps[i]^-1 (words over the generators),
    // visiting vertices in shortlex order of their least step word.
    // visit(step_word, generator_form, depth) returns false to stop early.
    // Throws BallExhausted when more than budget vertices would be stored.
    using CayleyVisitor
        = std::function<bool(Word const&, Word const&, std::size_t)>;
    void cayley_bfs(GroupModel const&        model,
                    std::vector<Word> const& steps,
                    std::size_t              radius,
                    std::size_t              budget,
                    CayleyVisitor const&     visit);

  }  // namespace detail

}  // namespace relcay
