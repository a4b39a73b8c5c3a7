#pragma once

#include <string>

#include <gmpxx.h>

#include "relcay/group_model.hpp"
#include "relcay/hyperbolicity.hpp"

namespace relcay {

  struct LadderInput {
    mpz_class delta{10};
    mpz_class E{0};
    mpz_class K{0};
    mpz_class N{1};
    bool      N_exact       = true;
    bool      delta_clamped = false;

    // Clamps delta up to 10 and records whether that happened.
    static LadderInput make(mpz_class delta, mpz_class E, mpz_class K, mpz_class N,
                            bool N_exact = true);
  };

  struct ConstantLadder {
    LadderInput inputs;
    mpz_class   K1, K2, K3, delta_prime;
    // Which term of the max defines delta_prime.
    bool first_branch = true;
  };

  // Throws ValidationError when delta < 10, N < 1 or E, K < 0.
  ConstantLadder ladder(LadderInput const& input);

  struct GrowthCount {
    mpz_class   N;
    bool        exact = true;
    std::string method;  // "enumerated", "closed form" or "lower bound"
  };

  // Number of elements of length at most E + K + 5 delta.
  GrowthCount compute_N(GroupModel const& model, mpz_class const& delta, mpz_class const& E,
                        mpz_class const& K, std::size_t budget = kDefaultBudget);
  // Number of elements of length at most radius.
  GrowthCount count_ball(GroupModel const& model, mpz_class const& radius,
                         std::size_t budget = kDefaultBudget);

  struct LadderVerdict {
    bool      consistent = true;
    // Only a report, never an assertion, when N was a lower bound.
    bool      asserted = true;
    // 2 (delta_prime - delta_emp).
    mpz_class doubled_slack;
    std::string slack_decimal() const;
  };

  LadderVerdict ladder_consistency(ConstantLadder const& ladder, DeltaReport const& y_report);

}  // namespace relcay
