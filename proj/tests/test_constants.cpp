#include "doctest.h"
#include "support.hpp"

#include "relcay/constants.hpp"
#include "relcay/errors.hpp"

using namespace relcay;

TEST_CASE("ladder arithmetic") {
  ConstantLadder l = ladder(LadderInput::make(10, 0, 0, 1));
  CHECK(l.K1 == 100);
  CHECK(l.K2 == 1191);
  CHECK(l.K3 == 1391);
  CHECK(l.delta_prime == 3102);
  CHECK(l.first_branch);

  ConstantLadder m = ladder(LadderInput::make(10, 1, 2, 5));
  CHECK(m.K1 == 465);
  CHECK(m.K2 == 4841);
  CHECK(m.K3 == 5771);
  CHECK(m.delta_prime == 12592);
}

TEST_CASE("ladder inputs") {
  LadderInput in = LadderInput::make(3, 0, 0, 1);
  CHECK(in.delta_clamped);
  CHECK(in.delta == 10);
  CHECK(ladder(in).delta_prime == 3102);
  LadderInput bad;
  bad.delta = 9;
  CHECK_THROWS_AS(ladder(bad), ValidationError);
  bad.delta = 10;
  bad.N     = 0;
  CHECK_THROWS_AS(ladder(bad), ValidationError);
}

TEST_CASE("ladder monotonicity and ordering over a grid") {
  for (long d = 10; d <= 14; ++d)
    for (long E = 0; E <= 4; ++E)
      for (long K = 0; K <= 4; ++K)
        for (long N = 1; N <= 4; ++N) {
          ConstantLadder l = ladder(LadderInput::make(d, E, K, N));
          CHECK(l.K3 > l.K2);
          CHECK(l.K2 > l.K1);
          CHECK(l.K1 > l.inputs.delta);
          CHECK(l.delta_prime >= 6 * l.K1 + 2 * l.K2 + 12 * l.inputs.delta);
          for (int which = 0; which < 4; ++which) {
            long            v[4] = {d, E, K, N};
            ++v[which];
            ConstantLadder  u    = ladder(LadderInput::make(v[0], v[1], v[2], v[3]));
            CHECK(u.K1 > l.K1);
            CHECK(u.K2 > l.K2);
            CHECK(u.K3 > l.K3);
            CHECK(u.delta_prime > l.delta_prime);
          }
          ConstantLadder e1 = ladder(LadderInput::make(d, E + 1, K, N));
          CHECK(e1.K1 - l.K1 == 1);
          if (l.first_branch && e1.first_branch) {
            CHECK(e1.delta_prime - l.delta_prime == 26);
          }
        }
}

TEST_CASE("ball counts") {
  auto f2 = fixture::load("f2.grp");
  CHECK(compute_N(*f2.model, 0, 0, 0).N == 1);
  auto n = compute_N(*f2.model, 0, 2, 0);
  CHECK(n.N == 17);
  CHECK(n.exact);
  CHECK(n.method == "closed form");
  auto t = fixture::load("z2table.grp");
  CHECK(compute_N(*t.model, 0, 1, 0).method == "enumerated");
  CHECK(compute_N(*t.model, 0, 1, 0).N == 2);
  CHECK(compute_N(*t.model, 10, 0, 0).N == 2);

  // Radius 50 in F2: 1 + 4 (3^50 - 1) / 2 = 2 3^50 - 1, far beyond any enumeration.
  auto big = compute_N(*f2.model, 10, 0, 0, 1000);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 3, 50);
  CHECK(big.N == 2 * p - 1);
  CHECK(big.exact);
  CHECK(big.method == "closed form");
  ConstantLadder l = ladder(LadderInput::make(10, 0, 0, big.N));
  CHECK(l.K1 == 10 + big.N * 90);

  auto z2 = fixture::load("z2.grp");
  auto c  = count_ball(*z2.model, 40, 100);
  CHECK(c.N == 2 * 40 * 40 + 2 * 40 + 1);
  CHECK(count_ball(*z2.model, 5).N == 61);

  auto s  = fixture::load("genus2.grp");
  auto lb = count_ball(*s.model, 10, 500);
  CHECK_FALSE(lb.exact);
  CHECK(lb.N >= 457);
  CHECK(lb.N <= 500);
}

TEST_CASE("ladder consistency") {
  ConstantLadder l = ladder(LadderInput::make(10, 0, 0, 1));
  DeltaReport    r;
  r.delta_emp = DoubledLength{0};
  LadderVerdict v = ladder_consistency(l, r);
  CHECK(v.consistent);
  CHECK(v.slack_decimal() == "3102");
  r.delta_emp = DoubledLength{2 * 3102 + 1};
  CHECK_FALSE(ladder_consistency(l, r).consistent);
  CHECK(ladder_consistency(l, r).slack_decimal() == "-0.5");
  ConstantLadder lb = ladder(LadderInput::make(10, 0, 0, 5, false));
  CHECK_FALSE(ladder_consistency(lb, DeltaReport{}).asserted);
}
