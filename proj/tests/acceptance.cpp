// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "support.hpp"

#include "relcay/constants.hpp"
#include "relcay/errors.hpp"
#include "relcay/hyperbolicity.hpp"
#include "relcay/random_walk.hpp"

using namespace relcay;

namespace {

  struct Outcome {
    bool        pass = true;
    std::string detail;
  };

  // Collects failures with a short description of the first few.
  class Tally {
   public:
    void expect(bool ok, std::string const& what) {
      ++_checks;
      if (!ok) {
        if (_failures++ < 5) {
          _first += (_first.empty() ? "" : "; ") + what;
        }
      }
    }
    Outcome outcome(std::string const& summary) const {
      if (_failures == 0) {
        return {true, summary + ", " + std::to_string(_checks) + " checks"};
      }
      return {false, std::to_string(_failures) + "/" + std::to_string(_checks)
                         + " checks failed: " + _first};
    }

   private:
    std::size_t _checks = 0, _failures = 0;
    std::string _first;
  };

  std::string str(mpq_class const& q) {
    return q.get_str();
  }

  mpq_class tree_closed_form(std::size_t r) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, r);
    mpq_class v = mpq_class(2, 3) / (1 - mpq_class(1) / mpq_class(p));
    v.canonicalize();
    return v;
  }

  // Depth chain: up-probability 3/4 away from the base, h(0) = 0, h(R) = 1.
  mpq_class tree_recurrence(std::size_t r) {
    std::vector<mpq_class> alpha{0, 1};
    mpq_class const        up(3, 4);
    for (std::size_t d = 1; d < r; ++d) {
      alpha.push_back((alpha[d] - (1 - up) * alpha[d - 1]) / up);
    }
    mpq_class h1 = 1 / alpha[r];
    return h1;
  }

  Outcome golden_distance() {
    auto        ha = fixture::load("f2.grp", "Ha");
    Word        w  = ha.word("a b a^100 b^-1 a^100");
    CosetMetric m(*ha.subgroup, 0);
    std::size_t d = m.distance(Word{}, w);
    Tally       t;
    t.expect(m.uses_core(), "no folded core");
    t.expect(d == 202, "distance " + std::to_string(d));
    return t.outcome("d = " + std::to_string(d) + " via folded core");
  }

  Outcome tree_hyperbolicity() {
    auto        f2 = fixture::load("f2.grp");
    CosetBall   b  = f2.ball(6);
    DeltaReport bi = bigon_delta(b);
    DeltaReport tr = trim_delta(b);
    Tally       t;
    t.expect(bi.delta_emp.value == 0 && bi.exhaustive && bi.certified, "bigon");
    t.expect(tr.delta_emp.value == 0 && tr.exhaustive && tr.certified, "trim");
    // The trim scan rests on the tree structure; confirm it directly on every
    // triangle through the base and on random triples.
    DistanceTable   d(b);
    std::size_t     triangles = 0;
    auto            one = [&](std::size_t x, std::size_t y, std::size_t z) {
      GeodesicTriangle g = make_triangle(d, x, y, z);
      if (g.certified) {
        ++triangles;
        if (triangle_trim(d, g).value != 0) {
          t.expect(false, "triangle " + std::to_string(x) + "," + std::to_string(y) + ","
                              + std::to_string(z));
        }
      }
    };
    for (std::size_t x = 0; x < b.size(); ++x) {
      for (std::size_t y = x + 1; y < b.size(); ++y) {
        one(x, y, 0);
      }
    }
    std::mt19937_64                            rng(6);
    std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
    for (int i = 0; i < 200'000; ++i) {
      one(pick(rng), pick(rng), pick(rng));
    }
    return t.outcome("bigon " + bi.delta_emp.decimal() + " (" + bi.method + "), trim "
                     + tr.delta_emp.decimal() + " (" + tr.method + "), "
                     + std::to_string(triangles) + " direct triangles");
  }

  Outcome z2_control() {
    auto              z2 = fixture::load("z2.grp");
    Tally             t;
    std::stringstream s;
    for (std::size_t r : {4, 6, 8}) {
      DeltaReport rep = bigon_delta(z2.ball(r));
      t.expect(rep.exhaustive && rep.certified, "R=" + std::to_string(r) + " not exhaustive");
      t.expect(rep.delta_emp.value >= 2 * static_cast<std::int64_t>(r / 2),
               "R=" + std::to_string(r) + " delta " + rep.delta_emp.decimal());
      s << (r == 4 ? "" : ", ") << "R=" << r << ": " << rep.delta_emp.decimal();
    }
    // In-repo brute force at the smallest radius.
    CosetBall b4 = z2.ball(4);
    t.expect(bigon_delta(b4).delta_emp.value == 2 * oracle::bigon_delta(b4), "brute force R=4");
    return t.outcome(s.str());
  }

  Outcome coset_hyperbolicity() {
    auto              ha = fixture::load("f2.grp", "Ha");
    CosetBall         big = ha.ball(10);
    Tally             t;
    std::stringstream s;
    for (std::size_t r : {4, 6, 8, 10}) {
      DeltaReport rep = bigon_delta(r == 10 ? big : big.restrict(r));
      t.expect(rep.exhaustive && rep.certified, "R=" + std::to_string(r) + " not exhaustive");
      t.expect(rep.delta_emp.value == 0, "R=" + std::to_string(r) + " delta "
                                             + rep.delta_emp.decimal());
      s << (r == 4 ? "" : ", ") << "R=" << r << ": " << rep.delta_emp.decimal();
    }
    return t.outcome(s.str());
  }

  Outcome ladder_arithmetic() {
    Tally t;
    auto  check = [&](long d, long E, long K, long N, long k1, long k2, long k3, long dp) {
      ConstantLadder l = ladder(LadderInput::make(d, E, K, N));
      std::string    tag = "(" + std::to_string(d) + "," + std::to_string(E) + ","
                        + std::to_string(K) + "," + std::to_string(N) + ")";
      t.expect(l.K1 == k1 && l.K2 == k2 && l.K3 == k3 && l.delta_prime == dp,
               tag + " gave " + l.K1.get_str() + "," + l.K2.get_str() + "," + l.K3.get_str()
                   + "," + l.delta_prime.get_str());
    };
    check(10, 0, 0, 1, 100, 1191, 1391, 3102);
    check(10, 1, 2, 5, 465, 4841, 5771, 12592);
    return t.outcome("(100, 1191, 1391, 3102), (465, 4841, 5771, 12592)");
  }

  Outcome escape_exactness() {
    Tally t;
    auto  z = fixture::load("z.grp");
    for (std::size_t r = 1; r <= 20; ++r) {
      EscapeEntry e = escape_exact(z.ball(r));
      t.expect(e.exact && e.p_esc == mpq_class(1, r), "Z R=" + std::to_string(r) + ": " + str(e.p_esc));
    }
    auto      f2  = fixture::load("f2.grp");
    CosetBall big = f2.ball(12);
    for (std::size_t r = 1; r <= 12; ++r) {
      EscapeEntry e = escape_exact(r == 12 ? big : big.restrict(r));
      t.expect(e.exact && e.p_esc == tree_closed_form(r),
               "tree R=" + std::to_string(r) + ": " + str(e.p_esc));
      t.expect(tree_closed_form(r) == tree_recurrence(r), "oracles disagree at R=" + std::to_string(r));
    }
    return t.outcome("Z R<=20, tree R<=12 exact");
  }

  Outcome transience_dichotomy() {
    std::vector<std::size_t> radii;
    for (std::size_t r = 4; r <= 12; ++r) {
      radii.push_back(r);
    }
    Tally             t;
    std::stringstream s;
    auto              run = [&](char const* name, char const* file, char const* sub,
                   WalkVerdict want) {
      EscapeProfile p = transience_profile(*fixture::load(file, sub).subgroup, radii);
      t.expect(p.verdict == want, std::string(name) + ": " + std::string(to_string(p.verdict)));
      t.expect(p.monotone, std::string(name) + " not monotone");
      t.expect(p.identity, std::string(name) + " identity");
      for (EscapeEntry const& e : p.entries) {
        t.expect(e.exact, std::string(name) + " inexact at R=" + std::to_string(e.radius));
      }
      s << (s.tellp() == 0 ? "" : ", ") << name << ": " << to_string(p.verdict);
    };
    run("index 2", "f2.grp", "Hidx2", WalkVerdict::Recurrence);
    run("Z", "z.grp", "1", WalkVerdict::Recurrence);
    run("tree", "f2.grp", "1", WalkVerdict::Transience);
    run("F2/<a>", "f2.grp", "Ha", WalkVerdict::Transience);
    return t.outcome(s.str());
  }

  Outcome monte_carlo() {
    Tally             t;
    std::stringstream s;
    auto              one = [&](char const* name, CosetBall const& b) {
      WalkConfig cfg;
      cfg.trials  = 100'000;
      cfg.seed    = 20240601;
      WalkResult   w = simulate(b, cfg);
      EscapeEntry  e = escape_exact(b);
      double const p = 1 - e.p_esc.get_d();
      double const f = w.return_freq.get_d();
      double const sigma = std::sqrt(p * (1 - p) / cfg.trials);
      t.expect(std::fabs(f - p) <= 3 * sigma, std::string(name) + " off by "
                                                  + std::to_string(std::fabs(f - p) / sigma) + " sigma");
      WalkResult again = simulate(b, cfg);
      t.expect(again.returned == w.returned && again.escaped_frontier == w.escaped_frontier
                   && again.still_walking == w.still_walking,
               std::string(name) + " rerun differs");
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s: %.4f vs %.4f (%.2f sigma)", name, f, p,
                    std::fabs(f - p) / sigma);
      s << (s.tellp() == 0 ? "" : ", ") << buf;
    };
    one("Z R=5", fixture::load("z.grp").ball(5));
    one("tree R=6", fixture::load("f2.grp").ball(6));
    return t.outcome(s.str());
  }

  Outcome embedding() {
    Tally         t;
    auto          p    = fixture::load("fxy.grp", "Hx");
    EmbeddingSpec spec = make_embedding_spec(*p.subgroup, p.word("y"), p.word("x"));
    t.expect(spec.lambda_prime == 5, "lambda' = " + std::to_string(spec.lambda_prime));
    EmbeddingReport r = build_embedding(*p.subgroup, spec, 2);
    t.expect(r.violations == 0, std::to_string(r.violations) + " violations");
    t.expect(r.lambda_emp > 0, "lambda_emp = " + str(r.lambda_emp));
    t.expect(free_product_sanity(*p.subgroup, p.word("y"), 8).ok, "sanity(y) false");
    t.expect(!free_product_sanity(*p.subgroup, p.word("xx"), 8).ok, "sanity(x^2) true");
    return t.outcome("lambda' = " + std::to_string(spec.lambda_prime) + ", "
                     + std::to_string(r.pairs) + " pairs, lambda_emp = " + str(r.lambda_emp));
  }

  struct Case {
    char const* file;
    char const* subgroup;
    std::size_t radius;
  };

  void gromov_and_triangles(Tally& t, CosetBall const& b, std::string const& tag) {
    DistanceTable d(b);
    DoubledLength delta = trim_delta(b).delta_emp;
    for (std::size_t x = 0; x < b.size(); ++x) {
      for (std::size_t y = 0; y < b.size(); ++y) {
        for (std::size_t z = 0; z < b.size(); ++z) {
          if (!d.certified(x, y) || !d.certified(y, z) || !d.certified(z, x)) {
            continue;
          }
          std::int64_t const dxy = d(x, y), dyz = d(y, z), dzx = d(z, x);
          std::int64_t const gz = gromov_product(d, x, y, z).value;
          std::int64_t const gx = gromov_product(d, y, z, x).value;
          std::int64_t const gy = gromov_product(d, z, x, y).value;
          bool ok = gz == gromov_product(d, y, x, z).value && gx + gy == 2 * dxy
                    && gy + gz == 2 * dyz && gz + gx == 2 * dzx && gz >= 0
                    && gz <= 2 * std::min(dzx, dyz);
          if (!ok) {
            t.expect(false, tag + " gromov");
            continue;
          }
          GeodesicTriangle tri = make_triangle(d, x, y, z);
          InscribedTriple  it  = inscribed_triple(d, tri);
          t.expect(it.p.offset == gz && it.q.offset == gz && it.r.offset == gx
                       && 2 * dzx - it.p.offset == gx && 2 * dyz - it.q.offset == gy
                       && 2 * dxy - it.r.offset == gy,
                   tag + " inscribed");
          if (z % 2 == 0) {
            bool all = true;
            for (std::int64_t o = 0; o <= 2 * dxy; ++o) {
              all = all && side_projection_check(d, tri, o, delta);
            }
            t.expect(all, tag + " side projection");
          }
        }
      }
    }
  }


  // Geodesics and one-letter detours between certified endpoints stay within
  // 3 max(delta, 10) of each other.
  void fellow_travel(Tally& t, CosetBall const& b, std::string const& tag) {
    DistanceTable     d(b);
    std::size_t const delta = std::max<std::int64_t>(10, (trim_delta(b).delta_emp.value + 1) / 2);
    for (std::size_t x = 0; x < b.size(); ++x) {
      for (std::size_t y = 0; y < b.size(); ++y) {
        if (x == y || !d.certified(x, y)) {
          continue;
        }
        auto gs = geodesics(b, x, y, 16);
        for (auto const& g : gs.paths) {
          t.expect(fellow_travel_check(d, gs.paths.front(), g, delta).empty(), tag + " geodesic");
        }
        // Near geodesic: step off to a neighbour of x, then follow a geodesic.
        for (std::uint32_t code = 0; code < 2 * b.k(); ++code) {
          std::uint32_t n = b.step(x, code);
          if (n == kNoVertex || n == x || !d.certified(n, y) || d(n, y) > d(x, y)) {
            continue;
          }
          std::vector<std::size_t> path{x};
          for (std::size_t v : d.canonical(n, y)) {
            path.push_back(v);
          }
          t.expect(fellow_travel_check(d, gs.paths.front(), path, delta).empty(), tag + " detour");
        }
      }
    }
  }

  // |hg| >= |h| + |g| - K_emp for h in H and g shortest in Hg, over the
  // group ball, with lengths and membership taken from the group model.
  void defect_inequality(Tally& t, fixture::Pair const& p, std::size_t r, std::string const& tag) {
    DefectReport const     rep   = estimate_K(*p.subgroup, r);
    GroupModel const&      model = *p.model;
    auto const             ball  = model.ball(r);
    std::vector<Word>      members, minimal;
    for (BallEntry const& e : ball) {
      if (p.subgroup->contains(e.word).inside()) {
        members.push_back(e.word);
      }
      if (model.geodesic_length(coset_min_rep(*p.subgroup, e.word)) == e.length) {
        minimal.push_back(e.word);
      }
    }
    t.expect(!members.empty() && !minimal.empty(), tag + " empty scan");
    for (Word const& h : members) {
      for (Word const& g : minimal) {
        std::size_t const lh = model.geodesic_length(h), lg = model.geodesic_length(g);
        std::size_t const lhg = model.geodesic_length(concat(h, g));
        t.expect(lhg + rep.K_emp >= lh + lg, tag + " defect");
      }
    }
  }

  void regularity_and_nesting(Tally& t, fixture::Pair const& p, std::size_t r,
                              std::string const& tag) {
    CosetBall                big = p.ball(r);
    std::vector<std::size_t> degree(big.size(), 0);
    for (auto const& e : big.edges()) {
      ++degree[e.src];
      ++degree[e.dst];
    }
    for (std::size_t v = 0; v < big.size(); ++v) {
      if (big.depth(v) < big.radius()) {
        t.expect(degree[v] == 2 * big.k(), tag + " degree");
        for (std::uint32_t code = 0; code < 2 * big.k(); ++code) {
          t.expect(big.step(v, code) != kNoVertex, tag + " missing step");
        }
      }
    }
    std::size_t last = 0;
    for (std::size_t s = 0; s <= r; ++s) {
      CosetBall small = p.ball(s);
      CosetBall cut   = big.restrict(s);
      t.expect(small.size() >= last, tag + " sizes shrink");
      last = small.size();
      t.expect(cut.size() == small.size() && cut.edges().size() == small.edges().size(),
               tag + " restrict");
      for (auto const& v : small.vertices()) {
        auto at = big.locate(v.rep);
        t.expect(at && big.depth(*at) == v.depth, tag + " nesting");
      }
    }
  }

  Outcome property_suites() {
    Case const cases[] = {
        {"f2.grp", "1", 3},     {"f2.grp", "Ha", 4},      {"f2.grp", "Ha2b2", 3},
        {"f2.grp", "Hidx2", 4}, {"z2.grp", "1", 4},       {"z2.grp", "Ha", 5},
        {"genus2.grp", "1", 2}, {"genus2.grp", "Ha", 2},
    };
    Tally t;
    for (Case c : cases) {
      std::string const tag = std::string(c.file) + "/" + c.subgroup;
      auto              p   = fixture::load(c.file, c.subgroup);
      CosetBall         b   = p.ball(c.radius);
      gromov_and_triangles(t, b, tag);
      fellow_travel(t, b, tag);
      regularity_and_nesting(t, p, c.radius, tag);
      if (std::string(c.subgroup) != "1") {
        auto group = fixture::load(c.file);
        CosetBall x    = group.ball(c.radius);
        auto      proj = quotient_projection_check(x, b);
        t.expect(proj.ok && proj.violations == 0 && (proj.pairs_checked > 0 || !b.certified()),
                 tag + " lipschitz");
        auto dx = oracle::all_pairs(x), dy = oracle::all_pairs(b);
        for (std::size_t g1 = 0; g1 < x.size(); ++g1) {
          auto i1 = b.locate(x.vertices()[g1].rep);
          for (std::size_t g2 = 0; g2 < x.size(); ++g2) {
            auto i2 = b.locate(x.vertices()[g2].rep);
            t.expect(i1 && i2 && dy[*i1][*i2] <= dx[g1][g2], tag + " raw lipschitz");
          }
        }
      }
    }
    for (auto [file, sub, r] : {std::tuple{"f2.grp", "Ha", 3}, std::tuple{"f2.grp", "Hab", 3},
                                std::tuple{"f2.grp", "Ha2b2", 3}, std::tuple{"z2.grp", "Ha", 4},
                                std::tuple{"genus2.grp", "Ha", 2}}) {
      defect_inequality(t, fixture::load(file, sub), r, std::string(file) + "/" + sub);
    }
    return t.outcome("8 fixtures at radius <= 5");
  }

  struct Criterion {
    int                      number;
    char const*              name;
    double                   limit_s;
    std::function<Outcome()> run;
  };

}  // namespace

int main() {
  Criterion const criteria[] = {
      {1, "golden coset distance", 5, golden_distance},
      {2, "tree hyperbolicity", 30, tree_hyperbolicity},
      {3, "Z^2 non-hyperbolic control", 60, z2_control},
      {4, "F2/<a> bigons bounded", 60, coset_hyperbolicity},
      {5, "ladder arithmetic", 1, ladder_arithmetic},
      {6, "escape exactness", 30, escape_exactness},
      {7, "transience dichotomy", 120, transience_dichotomy},
      {8, "monte carlo consistency", 60, monte_carlo},
      {9, "embedding sandwich", 60, embedding},
      {10, "property suites", 300, property_suites},
  };
  int failed = 0;
  for (Criterion const& c : criteria) {
    auto const start = std::chrono::steady_clock::now();
    Outcome    o;
    try {
      o = c.run();
    } catch (std::exception const& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double const s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s > c.limit_s) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    failed += !o.pass;
    std::printf("CRITERION %d: %s [%s] %s (%.2f s, limit %.0f s)\n", c.number,
                o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), s, c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
