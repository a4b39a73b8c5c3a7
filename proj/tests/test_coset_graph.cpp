#include "doctest.h"
#include "support.hpp"

#include "relcay/errors.hpp"

using namespace relcay;

namespace {

  void check_regular(CosetBall const& ball) {
    for (std::size_t v = 0; v < ball.size(); ++v) {
      if (ball.depth(v) == ball.radius()) {
        continue;
      }
      for (std::uint32_t code = 0; code < 2 * ball.k(); ++code) {
        CHECK(ball.step(v, code) != kNoVertex);
      }
    }
  }

}  // namespace

TEST_CASE("cayley ball of the free group is the 4-regular tree ball") {
  auto f2 = fixture::load("f2.grp");
  for (std::size_t r = 0; r <= 5; ++r) {
    CosetBall b = f2.ball(r);
    // 1 + 4 (3^r - 1) / 2
    std::size_t expected = 1;
    for (std::size_t i = 0, s = 4; i < r; ++i, s *= 3) {
      expected += s;
    }
    CHECK(b.size() == expected);
    CHECK(b.edges().size() == expected - 1);
    CHECK(b.certified());
    check_regular(b);
  }
}

TEST_CASE("golden coset distance through the folded core") {
  auto      ha = fixture::load("f2.grp", "Ha");
  Word      w  = ha.word("a b a^100 b^-1 a^100");
  CosetMetric metric(*ha.subgroup, 0);
  CHECK(metric.uses_core());
  CHECK(metric.distance(Word{}, w) == 202);
  CHECK(metric.depth(w) == 202);
}

TEST_CASE("coset balls of F2/<a>") {
  auto      ha = fixture::load("f2.grp", "Ha");
  CosetBall y  = ha.ball(1);
  CHECK(y.size() == 3);
  CHECK(y.edges().size() == 3);  // the a-loop and the two b-edges
  for (std::size_t r = 1; r <= 5; ++r) {
    check_regular(ha.ball(r));
  }
  // Every certified in-ball distance equals the core distance.
  CosetBall   b = ha.ball(4);
  CosetMetric exact(*ha.subgroup, 0);
  auto const  d = oracle::all_pairs(b);
  for (std::size_t u = 0; u < b.size(); ++u) {
    for (std::size_t v = 0; v < b.size(); ++v) {
      if (b.certifies(u, v, d[u][v])) {
        CHECK(exact.distance(b.vertices()[u].rep, b.vertices()[v].rep)
              == static_cast<std::size_t>(d[u][v]));
      }
    }
  }
}

TEST_CASE("finite index closes up") {
  auto      idx2 = fixture::load("f2.grp", "Hidx2");
  CosetBall b    = idx2.ball(4);
  CHECK(b.size() == 2);
  CHECK(b.closed());
  auto z = fixture::load("z.grp", "Ha2");
  CHECK(z.ball(1).size() == 2);
  CHECK_FALSE(z.ball(1).closed());
  CHECK(z.ball(2).closed());
}

TEST_CASE("restriction matches a direct build") {
  for (auto [file, sub] : {std::pair{"f2.grp", "Ha"}, std::pair{"z2.grp", "1"},
                           std::pair{"genus2.grp", "1"}}) {
    auto      p     = fixture::load(file, sub);
    CosetBall big   = p.ball(4);
    CosetBall small = big.restrict(2);
    CosetBall built = p.ball(2);
    REQUIRE(small.size() == built.size());
    for (std::size_t v = 0; v < small.size(); ++v) {
      CHECK(small.vertices()[v].rep == built.vertices()[v].rep);
    }
    CHECK(small.edges().size() == built.edges().size());
    // Nesting: each smaller ball's vertices reappear with the same depth.
    for (std::size_t v = 0; v < built.size(); ++v) {
      auto at = big.locate(built.vertices()[v].rep);
      REQUIRE(at);
      CHECK(big.depth(*at) == built.depth(v));
    }
  }
}

TEST_CASE("geodesic enumeration") {
  auto      z2 = fixture::load("z2.grp");
  CosetBall b  = z2.ball(4);
  auto      ab = b.locate(z2.word("ab"));
  auto      sq = b.locate(z2.word("aabb"));
  CHECK(geodesics(b, 0, *ab).paths.size() == 2);
  CHECK(geodesics(b, 0, *sq).paths.size() == 6);
  CHECK(to_string(path_label(b, geodesics(b, 0, *sq).paths.front()), b.alphabet()) == "aabb");

  auto      f2 = fixture::load("f2.grp");
  CosetBall t  = f2.ball(3);
  for (std::size_t v = 0; v < t.size(); v += 7) {
    CHECK(geodesics(t, 0, v).paths.size() == 1);
  }
  CHECK_THROWS_AS(geodesics(t, t.frontier()[0], t.frontier()[1]), Uncertified);
}

TEST_CASE("normal subgroups give quotient Cayley balls") {
  // Z^2/<a> is Z with an a-loop at every vertex.
  auto      z2 = fixture::load("z2.grp", "Ha");
  CosetBall b  = z2.ball(5);
  CHECK(b.size() == 11);
  std::size_t loops = 0;
  for (auto const& e : b.edges()) {
    if (e.src == e.dst) {
      CHECK(e.letter == 0);
      ++loops;
    }
  }
  CHECK(loops == b.size());  // frontier vertices included
  CHECK_FALSE(b.closed());

  // Z/<a^2> is the 2-cycle with a doubled edge.
  auto      z = fixture::load("z.grp", "Ha2");
  CosetBall c = z.ball(3);
  CHECK(c.size() == 2);
  CHECK(c.edges().size() == 2);
}

TEST_CASE("the quotient map is 1-Lipschitz") {
  for (auto [file, sub, r] : {std::tuple{"f2.grp", "Ha", 4}, std::tuple{"f2.grp", "Ha2b2", 4},
                              std::tuple{"z2.grp", "Ha", 5}, std::tuple{"genus2.grp", "Ha", 2}}) {
    CAPTURE(std::string(file) + "/" + sub);
    auto      p     = fixture::load(file, sub);
    auto      group = fixture::load(file);
    CosetBall x     = group.ball(r);
    CosetBall y     = p.ball(r);
    auto      check = quotient_projection_check(x, y);
    CHECK(check.ok);
    CHECK(check.violations == 0);
    // Certified pairs only; a bounded membership ball certifies none.
    CHECK((check.pairs_checked > 0) == y.certified());

    // Raw in-ball distances, certified or not.
    auto dx = oracle::all_pairs(x), dy = oracle::all_pairs(y);
    for (std::size_t g1 = 0; g1 < x.size(); ++g1) {
      std::size_t i1 = *y.locate(x.vertices()[g1].rep);
      for (std::size_t g2 = 0; g2 < x.size(); ++g2) {
        std::size_t i2 = *y.locate(x.vertices()[g2].rep);
        CHECK(dy[i1][i2] <= dx[g1][g2]);
      }
    }
  }
}

TEST_CASE("ball json round trip") {
  auto      ha = fixture::load("f2.grp", "Ha");
  CosetBall b  = ha.ball(3);
  CosetBall c  = ball_from_json(nlohmann::json::parse(to_json(b).dump()));
  CHECK(c.size() == b.size());
  CHECK(c.radius() == b.radius());
  CHECK(c.edges().size() == b.edges().size());
  CHECK(to_json(c).dump() == to_json(b).dump());
  CHECK_THROWS_AS(ball_from_json(nlohmann::json::parse(R"({"radius": 1})")), ValidationError);
}

TEST_CASE("coset metric on a ball") {
  auto        z2 = fixture::load("z2.grp", "Ha");
  CosetMetric m(*z2.subgroup, 6);
  CHECK_FALSE(m.uses_core());
  CHECK(m.distance(z2.word("aab"), z2.word("AbbB")) == 0);
  CHECK(m.distance(z2.word("1"), z2.word("bbb")) == 3);
  CHECK_THROWS_AS(m.distance(z2.word("1"), z2.word("b^9")), BallTooSmall);
}
