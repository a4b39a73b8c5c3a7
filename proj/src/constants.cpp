#include "relcay/constants.hpp"

#include "relcay/errors.hpp"

namespace relcay {

  LadderInput LadderInput::make(mpz_class delta, mpz_class E, mpz_class K, mpz_class N,
                                bool N_exact) {
    LadderInput in;
    in.delta_clamped = delta < 10;
    in.delta         = in.delta_clamped ? mpz_class(10) : delta;
    in.E             = std::move(E);
    in.K             = std::move(K);
    in.N             = std::move(N);
    in.N_exact       = N_exact;
    return in;
  }

  ConstantLadder ladder(LadderInput const& in) {
    if (in.delta < 10) {
      throw ValidationError("delta must be at least 10");
    }
    if (in.E < 0 || in.K < 0) {
      throw ValidationError("E and K must be nonnegative");
    }
    if (in.N < 1) {
      throw ValidationError("N must be at least 1");
    }
    ConstantLadder out;
    out.inputs           = in;
    mpz_class const& d   = in.delta;
    out.K1               = in.E + d + in.N * (8 * d + 10) + 2 * in.K;
    out.K2               = 18 * d + 10 * out.K1 + 11;
    out.K3               = 2 * out.K1 + out.K2;
    mpz_class const a    = 6 * out.K1 + 2 * out.K2 + 12 * d;
    mpz_class const b    = out.K3 + 7 * d;
    out.first_branch     = a >= b;
    out.delta_prime      = out.first_branch ? a : b;
    return out;
  }

  namespace {

    mpz_class binomial(mpz_class const& n, unsigned long k) {
      if (n < k) {
        return 0;
      }
      mpz_class r = 1;
      for (unsigned long i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
      }
      return r;
    }

  }  // namespace

  GrowthCount count_ball(GroupModel const& model, mpz_class const& radius, std::size_t budget) {
    if (radius < 0) {
      throw ValidationError("radius must be nonnegative");
    }
    if (!radius.fits_ulong_p()) {
      throw ValidationError("radius too large");
    }
    if (model.identity_marking() && model.backend() == Backend::FreeReduction) {
      // 1 + sum_{r=1}^{R} 2k (2k-1)^(r-1)
      mpz_class const k = static_cast<unsigned long>(model.k());
      mpz_class       n = 1;
      if (k == 1) {
        n = 1 + 2 * radius;
      } else if (k > 1) {
        mpz_class q;
        mpz_pow_ui(q.get_mpz_t(), mpz_class(2 * k - 1).get_mpz_t(), radius.get_ui());
        n = 1 + 2 * k * (q - 1) / (2 * k - 2);
      }
      return {n, true, "closed form"};
    }
    if (model.identity_marking() && model.backend() == Backend::AbelianNormalForm) {
      // sum_i 2^i C(n, i) C(R, i) lattice points of l1 norm at most R in Z^n
      unsigned long const rank = model.k();
      mpz_class           n    = 0;
      for (unsigned long i = 0; i <= rank; ++i) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, i);
        n += p * binomial(rank, i) * binomial(radius, i);
      }
      return {n, true, "closed form"};
    }
    std::size_t seen = 0;
    try {
      detail::cayley_bfs(model, model.steps(), radius.get_ui(), budget,
                         [&](Word const&, Word const&, std::size_t) {
                           ++seen;
                           return true;
                         });
      return {mpz_class(seen), true, "enumerated"};
    } catch (BallExhausted const&) {
    }
    return {mpz_class(seen), false, "lower bound"};
  }

  GrowthCount compute_N(GroupModel const& model, mpz_class const& delta, mpz_class const& E,
                        mpz_class const& K, std::size_t budget) {
    if (delta < 0 || E < 0 || K < 0) {
      throw ValidationError("delta, E and K must be nonnegative");
    }
    return count_ball(model, E + K + 5 * delta, budget);
  }

  std::string LadderVerdict::slack_decimal() const {
    mpz_class whole = doubled_slack / 2;
    std::string s   = whole.get_str();
    if (doubled_slack % 2 != 0) {
      if (doubled_slack < 0 && whole == 0) {
        s = "-0";
      }
      s += ".5";
    }
    return s;
  }

  LadderVerdict ladder_consistency(ConstantLadder const& ladder, DeltaReport const& y_report) {
    LadderVerdict v;
    v.doubled_slack = 2 * ladder.delta_prime - mpz_class(static_cast<long>(y_report.delta_emp.value));
    v.consistent    = v.doubled_slack >= 0;
    v.asserted      = ladder.inputs.N_exact;
    return v;
  }

}  // namespace relcay
