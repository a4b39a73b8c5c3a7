#include "relcay/hyperbolicity.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <thread>

#include "relcay/errors.hpp"

namespace relcay {

  std::string DoubledLength::decimal() const {
    std::string s = std::to_string(value / 2);
    if (value % 2 != 0) {
      s += ".5";
    }
    return s;
  }

  std::string_view to_string(DeltaMode mode) {
    switch (mode) {
      case DeltaMode::BigonThin:
        return "bigon";
      case DeltaMode::TrimTriangle:
        return "trim";
      case DeltaMode::FourPoint:
        return "four-point";
    }
    return "?";
  }

  DistanceTable::DistanceTable(CosetBall const& ball, std::size_t max_vertices)
      : _ball(&ball), _n(ball.size()) {
    if (_n > max_vertices) {
      throw BallExhausted("ball has " + std::to_string(_n)
                          + " vertices; the distance table allows at most "
                          + std::to_string(max_vertices));
    }
    _d.assign(_n * _n, std::numeric_limits<std::uint16_t>::max());
    std::vector<std::uint32_t> queue;
    for (std::size_t s = 0; s < _n; ++s) {
      std::uint16_t* row = &_d[s * _n];
      queue.assign(1, static_cast<std::uint32_t>(s));
      row[s] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t v = queue[head];
        for (std::uint32_t u : ball.neighbours(v)) {
          if (row[u] == std::numeric_limits<std::uint16_t>::max()) {
            row[u] = static_cast<std::uint16_t>(row[v] + 1);
            queue.push_back(u);
          }
        }
      }
    }
  }

  std::uint32_t DistanceTable::checked(std::size_t u, std::size_t v) const {
    if (!certified(u, v)) {
      throw Uncertified("distance between vertices " + std::to_string(u) + " and "
                        + std::to_string(v) + " is not certified");
    }
    return (*this)(u, v);
  }

  std::vector<std::size_t> DistanceTable::canonical(std::size_t u, std::size_t v) const {
    std::vector<std::size_t> path{u};
    std::size_t              p = u;
    while (p != v) {
      std::size_t next = kNoVertex;
      for (std::uint32_t code = 0; code < 2 * _ball->k(); ++code) {
        std::uint32_t q = _ball->step(p, code);
        if (q != kNoVertex && (*this)(q, v) + 1 == (*this)(p, v)) {
          next = q;
          break;
        }
      }
      if (next == kNoVertex) {
        throw Error("vertices " + std::to_string(u) + " and " + std::to_string(v)
                    + " are not connected in the ball");
      }
      path.push_back(next);
      p = next;
    }
    return path;
  }

  DoubledLength gromov_product(DistanceTable const& d, std::size_t x, std::size_t y,
                               std::size_t z) {
    std::int64_t a = d.checked(z, x), b = d.checked(z, y), c = d.checked(x, y);
    return DoubledLength{a + b - c};
  }

  GeodesicTriangle make_triangle(DistanceTable const& d, std::size_t x, std::size_t y,
                                 std::size_t z) {
    GeodesicTriangle t;
    t.x         = x;
    t.y         = y;
    t.z         = z;
    t.certified = d.certified(z, x) && d.certified(z, y) && d.certified(x, y);
    t.sides[0]  = d.canonical(z, x);
    t.sides[1]  = d.canonical(z, y);
    t.sides[2]  = d.canonical(x, y);
    return t;
  }

  namespace {

    // A vertex (u == v) or the midpoint of the edge uv.
    struct Point {
      std::size_t u, v;
    };

    Point point_at(std::span<std::size_t const> path, std::int64_t t, bool from_end) {
      std::int64_t const len2 = 2 * static_cast<std::int64_t>(path.size() - 1);
      if (t < 0 || t > len2) {
        throw ValidationError("offset " + std::to_string(t) + " lies outside a path of doubled length "
                              + std::to_string(len2));
      }
      if (from_end) {
        t = len2 - t;
      }
      if (t % 2 == 0) {
        return {path[t / 2], path[t / 2]};
      }
      return {path[(t - 1) / 2], path[(t + 1) / 2]};
    }

    std::int64_t doubled(DistanceTable const& d, Point a, Point b) {
      bool const ma = a.u != a.v, mb = b.u != b.v;
      if (!ma && !mb) {
        return 2 * std::int64_t{d(a.u, b.u)};
      }
      if (ma && mb) {
        if ((a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u)) {
          return 0;
        }
        std::uint32_t m = std::min({d(a.u, b.u), d(a.u, b.v), d(a.v, b.u), d(a.v, b.v)});
        return 2 * std::int64_t{m} + 2;
      }
      if (mb) {
        std::swap(a, b);
      }
      return 2 * std::int64_t{std::min(d(a.u, b.u), d(a.v, b.u))} + 1;
    }

    // max over 0 <= t <= limit of the distance between equal offsets.
    std::int64_t corner(DistanceTable const& d, std::span<std::size_t const> a, bool a_rev,
                        std::span<std::size_t const> b, bool b_rev, std::int64_t limit,
                        std::int64_t& at) {
      std::int64_t worst = 0;
      at                 = 0;
      for (std::int64_t t = 0; t <= limit; ++t) {
        std::int64_t v = doubled(d, point_at(a, t, a_rev), point_at(b, t, b_rev));
        if (v > worst) {
          worst = v;
          at    = t;
        }
      }
      return worst;
    }

    std::uint64_t splitmix(std::uint64_t& state) {
      std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
      z               = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z               = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    }

    struct Best {
      std::int64_t             value = -1;
      std::vector<std::size_t> witness;
      std::size_t              pairs   = 0;
      std::size_t              triples = 0;

      void offer(std::int64_t v, std::vector<std::size_t> const& w) {
        if (v > value) {
          value   = v;
          witness = w;
        }
      }
      void merge(Best const& other) {
        if (other.value > value) {
          value   = other.value;
          witness = other.witness;
        }
        pairs += other.pairs;
        triples += other.triples;
      }
    };

    // Runs body(i, best) for i in [0, n), split into contiguous slices.
    Best parallel_scan(std::size_t n, unsigned threads,
                       std::function<void(std::size_t, Best&)> const& body) {
      threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
      std::vector<Best> parts(threads);
      auto              run = [&](unsigned part) {
        std::size_t lo = n * part / threads, hi = n * (part + 1) / threads;
        for (std::size_t i = lo; i < hi; ++i) {
          body(i, parts[part]);
        }
      };
      if (threads == 1) {
        run(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned p = 0; p < threads; ++p) {
          pool.emplace_back(run, p);
        }
        for (auto& t : pool) {
          t.join();
        }
      }
      Best out;
      for (Best const& b : parts) {
        out.merge(b);
      }
      return out;
    }

    bool is_tree(CosetBall const& ball) {
      std::size_t twice = 0;
      for (std::size_t v = 0; v < ball.size(); ++v) {
        twice += ball.neighbours(v).size();
      }
      // In-ball graphs are connected, so n - 1 edges means a tree.
      return twice / 2 + 1 == ball.size();
    }

    DeltaReport finish(DeltaMode mode, CosetBall const& ball, Best const& best) {
      DeltaReport r;
      r.mode            = mode;
      r.radius          = ball.radius();
      r.delta_emp       = DoubledLength{std::max<std::int64_t>(best.value, 0)};
      r.witness         = best.witness;
      r.pairs_scanned   = best.pairs;
      r.triples_scanned = best.triples;
      r.certified       = ball.certified();
      return r;
    }

    // Biconnected blocks (vertex sets) of the simple graph.
    std::vector<std::vector<std::size_t>> blocks(CosetBall const& ball) {
      std::size_t const        n = ball.size();
      std::vector<std::size_t> disc(n, 0), low(n, 0);
      std::size_t              timer = 0;
      std::vector<std::vector<std::size_t>>              out;
      std::vector<std::pair<std::size_t, std::size_t>>  edge_stack;
      struct Frame {
        std::size_t v, parent, next;
      };
      for (std::size_t root = 0; root < n; ++root) {
        if (disc[root]) {
          continue;
        }
        std::vector<Frame> stack{{root, kNoVertex, 0}};
        disc[root] = low[root] = ++timer;
        while (!stack.empty()) {
          Frame& f  = stack.back();
          auto const& nb = ball.neighbours(f.v);
          if (f.next < nb.size()) {
            std::size_t u = nb[f.next++];
            if (!disc[u]) {
              edge_stack.emplace_back(f.v, u);
              disc[u] = low[u] = ++timer;
              stack.push_back({u, f.v, 0});
            } else if (u != f.parent && disc[u] < disc[f.v]) {
              edge_stack.emplace_back(f.v, u);
              low[f.v] = std::min(low[f.v], disc[u]);
            }
            continue;
          }
          std::size_t v = f.v, p = f.parent;
          stack.pop_back();
          if (p == kNoVertex) {
            continue;
          }
          low[p] = std::min(low[p], low[v]);
          if (low[v] >= disc[p]) {
            std::vector<std::size_t> block;
            while (true) {
              auto [a, b] = edge_stack.back();
              edge_stack.pop_back();
              block.push_back(a);
              block.push_back(b);
              if (a == p && b == v) {
                break;
              }
            }
            std::sort(block.begin(), block.end());
            block.erase(std::unique(block.begin(), block.end()), block.end());
            out.push_back(std::move(block));
          }
        }
      }
      return out;
    }

    // Vertices of I(x, y) sorted by distance from x.
    template <class Dist>
    std::vector<std::size_t> interval(std::size_t m, Dist const& dist, std::size_t x,
                                      std::size_t y) {
      std::vector<std::size_t> out;
      std::uint32_t const      d = dist(x, y);
      for (std::size_t p = 0; p < m; ++p) {
        if (dist(x, p) + dist(p, y) == d) {
          out.push_back(p);
        }
      }
      std::stable_sort(out.begin(), out.end(),
                       [&](std::size_t a, std::size_t b) { return dist(x, a) < dist(x, b); });
      return out;
    }

    // max over geodesics beta from x to y of min_{q on beta} dist(p, q):
    // a widest-path pass over the geodesic DAG.
    template <class Dist, class Adjacent>
    std::uint32_t widest(std::vector<std::size_t> const& iv, Dist const& dist,
                         Adjacent const& adjacent, std::size_t x, std::size_t p,
                         std::vector<std::uint32_t>& best) {
      best.assign(iv.size(), 0);
      best[0] = dist(p, x);
      for (std::size_t i = 1; i < iv.size(); ++i) {
        std::uint32_t through = 0;
        std::uint32_t layer   = dist(x, iv[i]);
        for (std::size_t j = 0; j < i; ++j) {
          if (dist(x, iv[j]) + 1 == layer && adjacent(iv[j], iv[i])) {
            through = std::max(through, best[j]);
          }
        }
        best[i] = std::min(dist(p, iv[i]), through);
      }
      return best.back();
    }

  }  // namespace

  std::int64_t point_distance(DistanceTable const& d, std::span<std::size_t const> path_a,
                              std::int64_t offset_a, std::span<std::size_t const> path_b,
                              std::int64_t offset_b) {
    return doubled(d, point_at(path_a, offset_a, false), point_at(path_b, offset_b, false));
  }

  DoubledLength triangle_trim(DistanceTable const& d, GeodesicTriangle const& t) {
    std::int64_t const dzx = d(t.z, t.x), dzy = d(t.z, t.y), dxy = d(t.x, t.y);
    std::int64_t       at  = 0;
    std::int64_t       worst = corner(d, t.sides[0], false, t.sides[1], false, dzx + dzy - dxy, at);
    worst = std::max(worst, corner(d, t.sides[0], true, t.sides[2], false, dzx + dxy - dzy, at));
    worst = std::max(worst, corner(d, t.sides[1], true, t.sides[2], true, dzy + dxy - dzx, at));
    return DoubledLength{worst};
  }

  InscribedTriple inscribed_triple(DistanceTable const& d, GeodesicTriangle const& t) {
    if (!t.certified) {
      throw Uncertified("triangle sides are not certified geodesics");
    }
    std::int64_t const gz = gromov_product(d, t.x, t.y, t.z).value;
    std::int64_t const gx = gromov_product(d, t.y, t.z, t.x).value;
    return InscribedTriple{SidePoint{0, gz}, SidePoint{1, gz}, SidePoint{2, gx}};
  }

  bool side_projection_check(DistanceTable const& d, GeodesicTriangle const& t,
                             std::int64_t offset_from_x, DoubledLength delta) {
    if (!t.certified) {
      throw Uncertified("triangle sides are not certified geodesics");
    }
    std::int64_t const dxy = d(t.x, t.y), dyz = d(t.y, t.z), dzx = d(t.z, t.x);
    Point const        a   = point_at(t.sides[2], offset_from_x, false);
    // [y, z] is alpha2 read backwards.
    std::int64_t const from_y = 2 * dxy - offset_from_x;
    if (from_y >= 0 && from_y <= 2 * dyz
        && doubled(d, a, point_at(t.sides[1], from_y, true)) <= delta.value) {
      return true;
    }
    // [z, x] is alpha1; measure from x, i.e. backwards.
    if (offset_from_x <= 2 * dzx
        && doubled(d, a, point_at(t.sides[0], offset_from_x, true)) <= delta.value) {
      return true;
    }
    return false;
  }

  DeltaReport bigon_delta(CosetBall const& ball, DeltaOptions const& options) {
    if (options.near_geodesic) {
      DistanceTable d(ball);
      std::size_t const n = ball.size();
      auto closed_nb = [&](std::size_t v) {
        std::vector<std::size_t> out{v};
        for (std::uint32_t u : ball.neighbours(v)) {
          out.push_back(u);
        }
        return out;
      };
      auto adjacent = [&](std::size_t a, std::size_t b) { return d(a, b) == 1; };
      Best best = parallel_scan(n, options.threads, [&](std::size_t x, Best& best) {
        std::vector<std::uint32_t> scratch;
        auto const                 nx = closed_nb(x);
        for (std::size_t y = x + 1; y < n; ++y) {
          if (!d.within_window(x, y)) {
            continue;
          }
          auto const ny = closed_nb(y);
          // Middle segments of near geodesics from x to y.
          std::vector<std::pair<std::size_t, std::size_t>> middles;
          for (std::size_t a : nx) {
            for (std::size_t b : ny) {
              if (d.within_window(a, b)) {
                middles.emplace_back(a, b);
              }
            }
          }
          ++best.pairs;
          std::vector<std::vector<std::size_t>> ivs;
          for (auto [a, b] : middles) {
            ivs.push_back(interval(n, d, a, b));
          }
          for (std::size_t i = 0; i < middles.size(); ++i) {
            for (std::size_t p : ivs[i]) {
              std::uint32_t worst = 0;
              for (std::size_t j = 0; j < middles.size(); ++j) {
                std::uint32_t far = widest(ivs[j], d, adjacent, middles[j].first, p, scratch);
                far               = std::min({far, d(p, x), d(p, y)});
                worst             = std::max(worst, far);
              }
              best.offer(worst, {x, y, p});
            }
          }
        }
      });
      DeltaReport r = finish(DeltaMode::BigonThin, ball, best);
      // Reported in vertex units; stored doubled like the other modes.
      r.delta_emp.value = 2 * std::max<std::int64_t>(best.value, 0);
      r.method          = "near-geodesic brute force";
      return r;
    }

    Best total;
    total.value = 0;
    for (auto const& block : blocks(ball)) {
      std::size_t const m = block.size();
      if (m < 3) {
        // A bridge carries a single geodesic; its pairs contribute 0.
        continue;
      }
      std::vector<std::uint32_t> local(ball.size(), kNoVertex);
      for (std::size_t i = 0; i < m; ++i) {
        local[block[i]] = static_cast<std::uint32_t>(i);
      }
      std::vector<std::uint32_t> dm(m * m, kNoVertex);
      std::vector<std::uint8_t>  adj(m * m, 0);
      for (std::size_t s = 0; s < m; ++s) {
        std::uint32_t*             row = &dm[s * m];
        std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(s)};
        row[s] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
          std::uint32_t v = queue[head];
          for (std::uint32_t g : ball.neighbours(block[v])) {
            std::uint32_t u = local[g];
            if (u == kNoVertex) {
              continue;
            }
            adj[v * m + u] = 1;
            if (row[u] == kNoVertex) {
              row[u] = row[v] + 1;
              queue.push_back(u);
            }
          }
        }
      }
      auto dist     = [&](std::size_t a, std::size_t b) { return dm[a * m + b]; };
      auto adjacent = [&](std::size_t a, std::size_t b) { return adj[a * m + b] != 0; };
      // Geodesics between two vertices of a block stay inside it, and any
      // pair of vertices in different blocks shares cut vertices in
      // between, so per-block scans cover every bigon.
      Best part = parallel_scan(m, options.threads, [&](std::size_t x, Best& best) {
        std::vector<std::uint32_t> scratch;
        for (std::size_t y = x + 1; y < m; ++y) {
          if (!ball.within_window(block[x], block[y], dist(x, y))) {
            continue;
          }
          ++best.pairs;
          auto iv = interval(m, dist, x, y);
          if (iv.size() == dist(x, y) + 1) {
            continue;  // a unique geodesic
          }
          for (std::size_t p : iv) {
            best.offer(widest(iv, dist, adjacent, x, p, scratch), {block[x], block[y], block[p]});
          }
        }
      });
      total.merge(part);
    }
    DeltaReport r = finish(DeltaMode::BigonThin, ball, total);
    r.delta_emp.value = 2 * std::max<std::int64_t>(total.value, 0);
    r.method          = "interval widest path per block";
    return r;
  }

  DeltaReport trim_delta(CosetBall const& ball, DeltaOptions const& options) {
    if (is_tree(ball)) {
      Best b;
      b.value       = 0;
      DeltaReport r = finish(DeltaMode::TrimTriangle, ball, b);
      r.method      = "tree";
      return r;
    }
    DistanceTable     d(ball);
    std::size_t const n = ball.size();
    auto triple = [&](std::size_t x, std::size_t y, std::size_t z, Best& best) {
      if (!d.within_window(x, y) || !d.within_window(y, z) || !d.within_window(z, x)) {
        return;
      }
      ++best.triples;
      GeodesicTriangle t = make_triangle(d, x, y, z);
      best.offer(triangle_trim(d, t).value, {x, y, z});
    };
    Best        best;
    bool const  exhaustive = n <= options.exhaustive_limit;
    if (exhaustive) {
      best = parallel_scan(n, options.threads, [&](std::size_t x, Best& b) {
        for (std::size_t y = 0; y < n; ++y) {
          for (std::size_t z = 0; z < n; ++z) {
            triple(x, y, z, b);
          }
        }
      });
    } else {
      best = parallel_scan(options.samples, options.threads, [&](std::size_t i, Best& b) {
        std::uint64_t state = options.seed ^ (0x632be59bd9b4e019ULL * (i + 1));
        std::size_t   x     = splitmix(state) % n;
        std::size_t   y     = splitmix(state) % n;
        std::size_t   z     = splitmix(state) % n;
        triple(x, y, z, b);
      });
    }
    DeltaReport r = finish(DeltaMode::TrimTriangle, ball, best);
    r.exhaustive  = exhaustive;
    r.method      = exhaustive ? "all ordered triples" : "sampled triples";
    return r;
  }

  DeltaReport four_point_delta(CosetBall const& ball, DeltaOptions const& options) {
    if (is_tree(ball)) {
      Best b;
      b.value       = 0;
      DeltaReport r = finish(DeltaMode::FourPoint, ball, b);
      r.method      = "tree";
      return r;
    }
    DistanceTable     d(ball);
    std::size_t const n = ball.size();
    auto quad = [&](std::size_t w, std::size_t x, std::size_t y, std::size_t z, Best& best) {
      std::size_t const pts[4] = {w, x, y, z};
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          if (!d.within_window(pts[i], pts[j])) {
            return;
          }
        }
      }
      ++best.triples;
      std::int64_t s[3] = {std::int64_t{d(w, x)} + d(y, z), std::int64_t{d(w, y)} + d(x, z),
                           std::int64_t{d(w, z)} + d(x, y)};
      std::sort(s, s + 3);
      best.offer(s[2] - s[1], {w, x, y, z});
    };
    // Sums are unchanged under permutations, so w < x < y < z suffices.
    double const quads      = static_cast<double>(n) * n * n * n / 24.0;
    bool const   exhaustive = quads <= static_cast<double>(options.exhaustive_limit)
                                         * options.exhaustive_limit * options.exhaustive_limit;
    Best best;
    if (exhaustive) {
      best = parallel_scan(n, options.threads, [&](std::size_t w, Best& b) {
        for (std::size_t x = w + 1; x < n; ++x) {
          for (std::size_t y = x + 1; y < n; ++y) {
            for (std::size_t z = y + 1; z < n; ++z) {
              quad(w, x, y, z, b);
            }
          }
        }
      });
    } else {
      best = parallel_scan(options.samples, options.threads, [&](std::size_t i, Best& b) {
        std::uint64_t state = options.seed ^ (0x632be59bd9b4e019ULL * (i + 1));
        std::size_t   p[4];
        for (auto& v : p) {
          v = splitmix(state) % n;
        }
        quad(p[0], p[1], p[2], p[3], b);
      });
    }
    DeltaReport r = finish(DeltaMode::FourPoint, ball, best);
    r.exhaustive  = exhaustive;
    r.method      = exhaustive ? "all quadruples" : "sampled quadruples";
    return r;
  }

  std::vector<std::size_t> vertex_path(CosetBall const& ball, std::size_t start,
                                       std::span<Letter const> w) {
    std::vector<std::size_t> path{start};
    std::size_t              v = start;
    for (Letter x : w) {
      std::uint32_t u = x.generator() < ball.k() ? ball.step(v, x.code()) : kNoVertex;
      if (u == kNoVertex) {
        throw BallTooSmall("path leaves the ball of radius " + std::to_string(ball.radius()));
      }
      path.push_back(u);
      v = u;
    }
    return path;
  }

  std::optional<NearGeodesicSplit> near_geodesic_split(DistanceTable const&         d,
                                                       std::span<std::size_t const> path) {
    std::size_t const len = path.size() - 1;
    auto geodesic_piece   = [&](std::size_t from, std::size_t to) {
      std::size_t const l = to - from;
      if (l == 0) {
        return true;
      }
      if (l == 1) {
        return path[from] != path[to];
      }
      return d.checked(path[from], path[to]) == l;
    };
    static constexpr std::pair<std::size_t, std::size_t> kOrder[] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (auto [pre, suf] : kOrder) {
      if (pre + suf > len) {
        continue;
      }
      if (geodesic_piece(0, pre) && geodesic_piece(len - suf, len)
          && geodesic_piece(pre, len - suf)) {
        return NearGeodesicSplit{pre, suf};
      }
    }
    return std::nullopt;
  }

  std::vector<FellowTravelViolation> fellow_travel_check(DistanceTable const&         d,
                                                         std::span<std::size_t const> alpha,
                                                         std::span<std::size_t const> beta,
                                                         std::size_t                  delta) {
    if (alpha.empty() || beta.empty() || alpha.front() != beta.front()
        || alpha.back() != beta.back()) {
      throw ValidationError("paths must share both endpoints");
    }
    if (!near_geodesic_split(d, alpha) || !near_geodesic_split(d, beta)) {
      throw ValidationError("both paths must be near geodesics");
    }
    std::vector<FellowTravelViolation> out;
    auto one_way = [&](std::span<std::size_t const> from, std::span<std::size_t const> to,
                       bool on_alpha) {
      for (std::size_t p : from) {
        std::uint32_t m = kNoVertex;
        for (std::size_t q : to) {
          m = std::min(m, d(p, q));
        }
        if (m > 3 * delta) {
          out.push_back({p, m, on_alpha});
        }
      }
    };
    one_way(alpha, beta, true);
    one_way(beta, alpha, false);
    return out;
  }

}  // namespace relcay
