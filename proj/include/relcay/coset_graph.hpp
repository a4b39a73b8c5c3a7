#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "relcay/subgroup.hpp"

namespace relcay {

  inline constexpr std::uint32_t kNoVertex = std::numeric_limits<std::uint32_t>::max();
  inline constexpr std::size_t   kDefaultGeodesicCap = 10'000;

  struct CosetVertex {
    std::size_t id    = 0;
    Word        rep;  // over the marked alphabet
    std::size_t depth = 0;
  };

  struct LabeledEdge {
    std::size_t   src    = 0;
    std::size_t   dst    = 0;
    std::uint32_t letter = 0;  // index into the alphabet, positive sign
  };

  // Radius-R ball of the Schreier graph of H in G around the base coset.
  class CosetBall {
   public:
    CosetBall() = default;
    CosetBall(Alphabet alphabet, std::size_t radius, bool certified,
              std::vector<CosetVertex> vertices, std::vector<LabeledEdge> edges);

    std::size_t radius() const noexcept {
      return _radius;
    }
    std::size_t k() const noexcept {
      return _alphabet.size();
    }
    Alphabet const& alphabet() const noexcept {
      return _alphabet;
    }
    bool certified() const noexcept {
      return _certified;
    }
    // No vertex sits at depth radius: the whole (finite) graph is present.
    bool closed() const noexcept {
      return _frontier.empty();
    }
    std::size_t size() const noexcept {
      return _vertices.size();
    }
    std::vector<CosetVertex> const& vertices() const noexcept {
      return _vertices;
    }
    std::vector<LabeledEdge> const& edges() const noexcept {
      return _edges;
    }
    std::vector<std::size_t> const& frontier() const noexcept {
      return _frontier;
    }
    std::size_t depth(std::size_t v) const {
      return _vertices.at(v).depth;
    }

    // Neighbour along the half-edge with the given letter code (2a for a,
    // 2a+1 for a^-1); kNoVertex when it leaves the ball.
    std::uint32_t step(std::size_t v, std::uint32_t code) const {
      return _half[v * 2 * k() + code];
    }
    // Distinct neighbours other than v itself, ascending.
    std::vector<std::uint32_t> const& neighbours(std::size_t v) const {
      return _neighbours[v];
    }
    // Vertex reached by reading w from the base, if it stays in the ball.
    std::optional<std::size_t> locate(std::span<Letter const> w) const;

    // In-ball BFS distances from source (kNoVertex when unreachable).
    std::vector<std::uint32_t> distances_from(std::size_t source) const;

    // Whether an in-ball distance d between u and v is the true distance.
    bool certifies(std::size_t u, std::size_t v, std::size_t d) const;
    // The geometric half of certifies(): no shorter path can leave the
    // ball. Ignores whether coset identification was exact.
    bool within_window(std::size_t u, std::size_t v, std::size_t d) const;

    // d and whether it is certified.
    std::pair<std::size_t, bool> distance(std::size_t u, std::size_t v) const;

    // Restriction to the vertices of depth at most radius.
    CosetBall restrict(std::size_t radius) const;

   private:
    Alphabet                                 _alphabet;
    std::size_t                              _radius    = 0;
    bool                                     _certified = true;
    std::vector<CosetVertex>                 _vertices;
    std::vector<LabeledEdge>                 _edges;
    std::vector<std::size_t>                 _frontier;
    std::vector<std::uint32_t>               _half;
    std::vector<std::vector<std::uint32_t>>  _neighbours;
  };

  // Spec for the trivial subgroup with an exact membership mode.
  SubgroupSpec trivial_subgroup_spec(GroupModel const& model);

  CosetBall build_ball(Subgroup const& subgroup, std::size_t radius,
                       std::size_t budget = kDefaultBudget);

  struct GeodesicList {
    std::vector<std::vector<std::size_t>> paths;
    bool                                  capped = false;
  };

  // All geodesic vertex paths from u to v, ordered by their least edge
  // label sequence, at most cap of them. Throws Uncertified when the
  // distance is not certified.
  GeodesicList geodesics(CosetBall const& ball, std::size_t u, std::size_t v,
                         std::size_t cap = kDefaultGeodesicCap);
  // The first entry of geodesics(), computed directly.
  std::vector<std::size_t> canonical_geodesic(CosetBall const&                  ball,
                                              std::vector<std::uint32_t> const& dist_to_v,
                                              std::size_t u, std::size_t v);

  // Least edge label sequence along a vertex path.
  Word path_label(CosetBall const& ball, std::span<std::size_t const> path);

  struct ProjectionCheck {
    bool        ok              = true;
    std::size_t pairs_checked   = 0;
    std::size_t violations      = 0;
  };

  // d_Y(Hg1, Hg2) <= d_X(g1, g2) for certified pairs from the group ball
  // (built with H = 1); samples = 0 checks every pair.
  ProjectionCheck quotient_projection_check(CosetBall const& group_ball,
                                            CosetBall const& coset_ball,
                                            std::size_t samples = 0,
                                            std::uint64_t seed = 1);

  // Exact d_Y between cosets of words over the marked alphabet. Uses the
  // folded core for free groups with the identity marking, and otherwise
  // the in-ball distance of a ball of the given radius.
  class CosetMetric {
   public:
    CosetMetric(Subgroup const& subgroup, std::size_t radius,
                std::size_t budget = kDefaultBudget);

    // Throws BallTooSmall if a coset lies outside the ball, Uncertified
    // if the in-ball distance is not certified.
    std::size_t distance(std::span<Letter const> u, std::span<Letter const> v) const;
    std::size_t depth(std::span<Letter const> w) const;
    bool uses_core() const noexcept {
      return !_ball;
    }

   private:
    struct Point {
      std::size_t vertex;
      Word        suffix;
    };
    Point point(std::span<Letter const> w) const;

    Subgroup const*                     _subgroup;
    std::optional<CosetBall>            _ball;
    std::shared_ptr<CosetIndex>         _index;
  };

  nlohmann::ordered_json to_json(CosetBall const& ball);
  // Throws ValidationError on malformed input.
  CosetBall ball_from_json(nlohmann::json const& j);

}  // namespace relcay
