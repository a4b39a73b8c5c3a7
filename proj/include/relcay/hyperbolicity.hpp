#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relcay/coset_graph.hpp"

namespace relcay {

  // A half-integer stored as twice its value.
  struct DoubledLength {
    std::int64_t value = 0;

    auto operator<=>(DoubledLength const&) const = default;
    // "3", "2.5", ...
    std::string decimal() const;
  };

  // All-pairs distances of a ball (simple graph: loops and parallel edges
  // collapse).
  class DistanceTable {
   public:
    // Throws BallExhausted above max_vertices.
    explicit DistanceTable(CosetBall const& ball, std::size_t max_vertices = 8192);

    CosetBall const& ball() const noexcept {
      return *_ball;
    }
    std::uint32_t operator()(std::size_t u, std::size_t v) const {
      return _d[u * _n + v];
    }
    bool certified(std::size_t u, std::size_t v) const {
      return _ball->certifies(u, v, (*this)(u, v));
    }
    bool within_window(std::size_t u, std::size_t v) const {
      return _ball->within_window(u, v, (*this)(u, v));
    }
    // d(u, v) after checking certification; throws Uncertified.
    std::uint32_t checked(std::size_t u, std::size_t v) const;
    // Canonical geodesic from u to v.
    std::vector<std::size_t> canonical(std::size_t u, std::size_t v) const;

   private:
    CosetBall const*           _ball;
    std::size_t                _n;
    std::vector<std::uint16_t> _d;
  };

  // (x, y)_z in doubled form; throws Uncertified.
  DoubledLength gromov_product(DistanceTable const& d, std::size_t x, std::size_t y,
                               std::size_t z);

  // A point on a side: vertex or edge midpoint at a doubled offset from the
  // side's start.
  struct SidePoint {
    std::size_t  side   = 0;  // 0: alpha1 = [z,x], 1: alpha2 = [z,y], 2: alpha3 = [x,y]
    std::int64_t offset = 0;
  };

  struct GeodesicTriangle {
    std::size_t              x = 0, y = 0, z = 0;
    std::vector<std::size_t> sides[3];
    bool                     certified = false;
  };

  // Canonical sides alpha1 = [z,x], alpha2 = [z,y], alpha3 = [x,y].
  GeodesicTriangle make_triangle(DistanceTable const& d, std::size_t x, std::size_t y,
                                 std::size_t z);

  struct InscribedTriple {
    SidePoint p, q, r;
  };
  // Throws Uncertified for uncertified triangles.
  InscribedTriple inscribed_triple(DistanceTable const& d, GeodesicTriangle const& t);

  // Doubled distance between points at doubled offsets on two vertex paths.
  std::int64_t point_distance(DistanceTable const& d, std::span<std::size_t const> path_a,
                              std::int64_t offset_a, std::span<std::size_t const> path_b,
                              std::int64_t offset_b);

  enum class DeltaMode { BigonThin, TrimTriangle, FourPoint };
  std::string_view to_string(DeltaMode mode);

  struct DeltaOptions {
    bool          near_geodesic    = false;  // bigons only
    std::size_t   exhaustive_limit = 600;    // vertex count for full triple/quadruple scans
    std::size_t   samples          = 200'000;
    std::uint64_t seed             = 1;
    unsigned      threads          = 1;
  };

  struct DeltaReport {
    DeltaMode                mode   = DeltaMode::BigonThin;
    std::size_t              radius = 0;
    DoubledLength            delta_emp;
    std::vector<std::size_t> witness;  // vertex ids of the maximising configuration
    std::size_t              pairs_scanned   = 0;
    std::size_t              triples_scanned = 0;
    bool                     exhaustive      = true;
    bool                     certified       = true;
    std::string              method;
  };

  // Max one-sided vertex Hausdorff distance over all pairs of geodesics
  // between certified endpoints, computed exactly per biconnected block.
  DeltaReport bigon_delta(CosetBall const& ball, DeltaOptions const& options = {});
  DeltaReport trim_delta(CosetBall const& ball, DeltaOptions const& options = {});
  DeltaReport four_point_delta(CosetBall const& ball, DeltaOptions const& options = {});

  // Max over corners of matched-point distances for one triangle.
  DoubledLength triangle_trim(DistanceTable const& d, GeodesicTriangle const& t);

  struct NearGeodesicSplit {
    std::size_t prefix = 0;  // l(p1)
    std::size_t suffix = 0;  // l(p2)
  };

  // Path as consecutive vertices (equal or adjacent). Throws Uncertified
  // when a needed distance is not certified.
  std::optional<NearGeodesicSplit> near_geodesic_split(DistanceTable const& d,
                                                       std::span<std::size_t const> path);

  // Vertex path obtained by reading w from start; throws BallTooSmall.
  std::vector<std::size_t> vertex_path(CosetBall const& ball, std::size_t start,
                                       std::span<Letter const> w);

  struct FellowTravelViolation {
    std::size_t vertex;
    std::size_t distance;
    bool        on_alpha;  // vertex lies on alpha (else on beta)
  };

  // Vertices of either path farther than 3 delta from the other path.
  // Throws ValidationError unless beta is a near geodesic with alpha's
  // endpoints.
  std::vector<FellowTravelViolation> fellow_travel_check(DistanceTable const&         d,
                                                         std::span<std::size_t const> alpha,
                                                         std::span<std::size_t const> beta,
                                                         std::size_t                  delta);

  // Either an equal-offset point on [y,z] or on [z,x] lies within delta of
  // the point a on [x,y] (doubled offset from x).
  bool side_projection_check(DistanceTable const& d, GeodesicTriangle const& t,
                             std::int64_t offset_from_x, DoubledLength delta);

}  // namespace relcay
