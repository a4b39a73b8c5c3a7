#include "relcay/random_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "relcay/detail/linear_solver.hpp"
#include "relcay/errors.hpp"

namespace relcay {

  namespace {

    std::uint64_t mix(std::uint64_t z) {
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    }

    // SplitMix64 stream keyed by (seed, trial).
    struct TrialStream {
      std::uint64_t state;
      TrialStream(std::uint64_t seed, std::uint64_t trial)
          : state(mix(seed ^ mix(trial + 0x9e3779b97f4a7c15ULL))) {}
      std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        return mix(state);
      }
      // Uniform in [0, n) for small n.
      std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(((next() >> 32) * n) >> 32);
      }
    };

    void require_walkable(CosetBall const& ball) {
      if (ball.radius() < 1 || ball.size() == 0) {
        throw ValidationError("random walks need a ball of radius at least 1");
      }
    }

    // Variables are the vertices strictly between the base and the frontier.
    struct Network {
      std::vector<std::uint32_t>                      var;  // vertex -> unknown or kNoVertex
      std::vector<std::uint32_t>                      order;
      std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> mult;  // non-loop, by vertex
      std::vector<std::int64_t>                       loops;
      std::size_t                                     unknowns = 0;
    };

    bool boundary(CosetBall const& ball, std::size_t v) {
      return v == 0 || ball.depth(v) == ball.radius();
    }

    Network network(CosetBall const& ball) {
      std::size_t const n = ball.size();
      Network           net;
      net.var.assign(n, kNoVertex);
      net.mult.assign(n, {});
      net.loops.assign(n, 0);
      for (LabeledEdge const& e : ball.edges()) {
        if (e.src == e.dst) {
          ++net.loops[e.src];
          continue;
        }
        for (auto [a, b] : {std::pair{e.src, e.dst}, std::pair{e.dst, e.src}}) {
          auto& row = net.mult[a];
          auto  it  = std::find_if(row.begin(), row.end(), [b](auto const& p) { return p.first == b; });
          if (it == row.end()) {
            row.emplace_back(static_cast<std::uint32_t>(b), 1);
          } else {
            ++it->second;
          }
        }
      }
      std::int64_t const deg = 2 * static_cast<std::int64_t>(ball.k());
      for (std::size_t v = 0; v < n; ++v) {
        if (ball.depth(v) == ball.radius()) {
          continue;
        }
        std::int64_t d = 2 * net.loops[v];
        for (auto [u, m] : net.mult[v]) {
          d += m;
        }
        if (d != deg) {
          throw Error("vertex " + std::to_string(v) + " has degree " + std::to_string(d)
                      + " instead of " + std::to_string(deg));
        }
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (!boundary(ball, v)) {
          net.var[v] = static_cast<std::uint32_t>(net.unknowns++);
        }
      }
      // Deepest first keeps fill-in at zero on trees.
      std::vector<std::size_t> by_depth;
      for (std::size_t v = 0; v < n; ++v) {
        if (net.var[v] != kNoVertex) {
          by_depth.push_back(v);
        }
      }
      std::stable_sort(by_depth.begin(), by_depth.end(), [&](std::size_t a, std::size_t b) {
        return ball.depth(a) > ball.depth(b);
      });
      for (std::size_t v : by_depth) {
        net.order.push_back(net.var[v]);
      }
      return net;
    }

    // Interior equations diag h(v) - sum m h(u) = rhs, with rhs picking up
    // the boundary value from either the frontier or the base.
    detail::IntegerSystem assemble(CosetBall const& ball, Network const& net, bool frontier_one) {
      detail::IntegerSystem sys(net.unknowns);
      for (std::size_t v = 0; v < ball.size(); ++v) {
        std::uint32_t i = net.var[v];
        if (i == kNoVertex) {
          continue;
        }
        for (auto [u, m] : net.mult[v]) {
          sys.diagonal[i] += m;
          if (net.var[u] != kNoVertex) {
            if (net.var[u] > i) {
              sys.add_symmetric(i, net.var[u], -m);
            }
          } else if ((u == 0) != frontier_one) {
            sys.rhs[i] += m;
          }
        }
      }
      return sys;
    }

    struct Solution {
      bool                     exact = true;
      std::vector<mpq_class>   q;
      std::vector<long double> f;
      long double              residual = 0;
    };

    Solution solve(detail::IntegerSystem const& sys, Network const& net,
                   SolveOptions const& options) {
      Solution s;
      if (!options.force_float) {
        if (auto x = detail::solve_exact(sys, net.order, options.fill_limit)) {
          s.q = std::move(*x);
          return s;
        }
      }
      s.exact                 = false;
      detail::FloatSolution f = detail::solve_cg(sys);
      s.f                     = std::move(f.x);
      s.residual              = f.residual;
      return s;
    }

    // Value at vertex u given the boundary convention.
    template <class T>
    T value_at(CosetBall const& ball, Network const& net, std::vector<T> const& x, std::size_t u,
               bool frontier_one) {
      if (net.var[u] != kNoVertex) {
        return x[net.var[u]];
      }
      bool const at_frontier = u != 0 && ball.depth(u) == ball.radius();
      return T(at_frontier == frontier_one ? 1 : 0);
    }

  }  // namespace

  std::string_view to_string(WalkVerdict verdict) {
    switch (verdict) {
      case WalkVerdict::Transience:
        return "transience evidence";
      case WalkVerdict::Recurrence:
        return "recurrence evidence";
      case WalkVerdict::Inconclusive:
        return "inconclusive";
    }
    return "?";
  }

  WalkResult simulate(CosetBall const& ball, WalkConfig const& config) {
    require_walkable(ball);
    if (config.steps < 1 || config.trials < 1) {
      throw ValidationError("steps and trials must be at least 1");
    }
    std::uint32_t const slots   = static_cast<std::uint32_t>(2 * ball.k());
    std::size_t const   radius  = ball.radius();
    unsigned const      threads = std::max(1u, std::min<unsigned>(config.threads, 64));
    struct Counts {
      std::size_t returned = 0, escaped = 0, walking = 0;
    };
    std::vector<Counts> parts(threads);
    auto run = [&](unsigned part) {
      std::size_t lo = config.trials * part / threads, hi = config.trials * (part + 1) / threads;
      Counts&     c  = parts[part];
      for (std::size_t t = lo; t < hi; ++t) {
        TrialStream rng(config.seed, t);
        std::size_t v    = 0;
        bool        done = false;
        for (std::size_t s = 0; s < config.steps; ++s) {
          v = ball.step(v, rng.below(slots));
          if (v == 0) {
            ++c.returned;
            done = true;
            break;
          }
          if (ball.depth(v) == radius) {
            ++c.escaped;
            done = true;
            break;
          }
        }
        if (!done) {
          ++c.walking;
        }
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
    WalkResult r;
    for (Counts const& c : parts) {
      r.returned += c.returned;
      r.escaped_frontier += c.escaped;
      r.still_walking += c.walking;
    }
    r.trials      = config.trials;
    r.return_freq = mpq_class(static_cast<unsigned long>(r.returned),
                              static_cast<unsigned long>(r.trials));
    r.return_freq.canonicalize();
    r.certified = ball.certified();
    return r;
  }

  EscapeEntry escape_exact(CosetBall const& ball, SolveOptions const& options) {
    require_walkable(ball);
    EscapeEntry e;
    e.radius    = ball.radius();
    e.vertices  = ball.size();
    e.closed    = ball.closed();
    e.certified = ball.certified();
    if (e.closed) {
      e.p_esc   = 0;
      e.p_value = 0;
      return e;
    }
    Network const  net = network(ball);
    auto const     sys = assemble(ball, net, true);
    Solution const sol = solve(sys, net, options);
    e.exact            = sol.exact;
    e.residual         = sol.residual;
    long const deg     = 2 * static_cast<long>(ball.k());
    if (sol.exact) {
      mpq_class sum = 0;
      for (auto [u, m] : net.mult[0]) {
        sum += m * value_at(ball, net, sol.q, u, true);
      }
      e.p_esc = sum / deg;
      e.p_esc.canonicalize();
      e.p_value = e.p_esc.get_d();
    } else {
      long double sum = 0;
      for (auto [u, m] : net.mult[0]) {
        sum += m * value_at(ball, net, sol.f, u, true);
      }
      e.p_value = sum / deg;
    }
    return e;
  }

  void resistance(CosetBall const& ball, EscapeEntry& e, SolveOptions const& options) {
    require_walkable(ball);
    if (ball.closed()) {
      e.r_eff.reset();
      return;
    }
    Network const net = network(ball);
    auto const    sys = assemble(ball, net, false);
    SolveOptions  opt = options;
    opt.force_float   = options.force_float || !e.exact;
    Solution const sol = solve(sys, net, opt);
    if (sol.exact) {
      // Current out of the base at unit potential.
      mpq_class current = 0;
      for (auto [u, m] : net.mult[0]) {
        current += m * (1 - value_at(ball, net, sol.q, u, false));
      }
      if (current == 0) {
        throw SingularSystem("no current reaches the frontier");
      }
      mpq_class r = 1 / current;
      r.canonicalize();
      e.r_eff   = r;
      e.r_value = r.get_d();
    } else {
      long double current = 0;
      for (auto [u, m] : net.mult[0]) {
        current += m * (1 - value_at(ball, net, sol.f, u, false));
      }
      e.r_value  = 1 / current;
      e.residual = std::max(e.residual, sol.residual);
    }
  }

  EscapeEntry escape_and_resistance(CosetBall const& ball, SolveOptions const& options) {
    EscapeEntry e = escape_exact(ball, options);
    resistance(ball, e, options);
    if (e.closed) {
      e.identity = true;  // p = 0 and R_eff is infinite: nothing to compare
    } else if (e.exact && e.r_eff) {
      e.identity = e.p_esc * mpq_class(2 * static_cast<long>(ball.k())) * *e.r_eff == 1;
    } else {
      e.identity = std::fabs(e.p_value * 2 * ball.k() * e.r_value - 1) <= 1e-9L;
    }
    return e;
  }

  void classify(EscapeProfile& profile) {
    auto const& es = profile.entries;
    profile.limit.reset();
    if (es.empty()) {
      profile.verdict = WalkVerdict::Inconclusive;
      profile.reason  = "no radii";
      return;
    }
    if (std::any_of(es.begin(), es.end(), [](EscapeEntry const& e) { return e.closed; })) {
      profile.verdict = WalkVerdict::Recurrence;
      profile.reason  = "the coset graph is finite";
      return;
    }
    auto p = [&](std::size_t i) { return es[i].p_value; };
    long double const q_first = p(0) * es.front().radius;
    long double const q_last  = p(es.size() - 1) * es.back().radius;
    if (es.size() >= 2 && q_last <= 1.25L * q_first) {
      profile.verdict = WalkVerdict::Recurrence;
      profile.reason  = "p_esc(R) * R stays bounded";
      return;
    }
    if (es.size() >= 3) {
      long double ratio = 0;
      bool        ok    = true;
      for (std::size_t i = 0; i + 2 < es.size(); ++i) {
        long double d0 = p(i) - p(i + 1), d1 = p(i + 1) - p(i + 2);
        if (d0 < 0 || d1 < 0) {
          ok = false;
          break;
        }
        if (d0 == 0) {
          if (d1 != 0) {
            ok = false;
            break;
          }
          continue;
        }
        ratio = std::max(ratio, d1 / d0);
      }
      if (ok && ratio <= 0.9L) {
        std::size_t const last = es.size() - 1;
        long double const tail = (p(last - 1) - p(last)) * ratio / (1 - ratio);
        long double const lim  = p(last) - tail;
        if (lim > 0) {
          profile.verdict = WalkVerdict::Transience;
          profile.reason  = "decrements shrink geometrically to a positive limit";
          profile.limit   = lim;
          return;
        }
      }
    }
    profile.verdict = WalkVerdict::Inconclusive;
    profile.reason  = "neither rule applies";
  }

  EscapeProfile transience_profile(Subgroup const& subgroup, std::vector<std::size_t> radii,
                                   std::size_t budget, SolveOptions const& options) {
    if (radii.empty()) {
      throw ValidationError("transience_profile needs at least one radius");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] < 1 || (i > 0 && radii[i] <= radii[i - 1])) {
        throw ValidationError("radii must be increasing and positive");
      }
    }
    CosetBall const full = build_ball(subgroup, radii.back(), budget);
    EscapeProfile   profile;
    for (std::size_t r : radii) {
      CosetBall ball = r == full.radius() ? full : full.restrict(r);
      profile.entries.push_back(escape_and_resistance(ball, options));
    }
    for (std::size_t i = 0; i < profile.entries.size(); ++i) {
      EscapeEntry const& e = profile.entries[i];
      profile.identity     = profile.identity && e.identity;
      if (i == 0) {
        continue;
      }
      EscapeEntry const& prev = profile.entries[i - 1];
      bool p_ok = prev.exact && e.exact ? e.p_esc <= prev.p_esc : e.p_value <= prev.p_value + 1e-12L;
      bool r_ok = true;
      if (prev.r_eff && e.r_eff) {
        r_ok = *e.r_eff >= *prev.r_eff;
      } else if (!prev.closed && !e.closed) {
        r_ok = e.r_value + 1e-12L >= prev.r_value;
      }
      profile.monotone = profile.monotone && p_ok && r_ok;
    }
    classify(profile);
    return profile;
  }

}  // namespace relcay
