#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "relcay/coset_graph.hpp"

namespace relcay {

  struct WalkConfig {
    std::size_t   steps   = 1'000'000;
    std::size_t   trials  = 100'000;
    std::uint64_t seed    = 1;
    unsigned      threads = 1;
  };

  struct WalkResult {
    std::size_t returned         = 0;
    std::size_t escaped_frontier = 0;
    std::size_t still_walking    = 0;
    std::size_t trials           = 0;
    mpq_class   return_freq;
    bool        certified = true;
  };

  // Monte-Carlo simple random walk from the base vertex, stopped on return,
  // on reaching the frontier, or after config.steps steps.
  WalkResult simulate(CosetBall const& ball, WalkConfig const& config);

  struct EscapeEntry {
    std::size_t radius   = 0;
    std::size_t vertices = 0;
    bool        closed   = false;
    bool        exact    = true;  // rational solve (else floating point)
    bool        certified = true;
    mpq_class   p_esc;            // valid when exact
    long double p_value = 0;
    // Effective resistance base <-> frontier; absent for closed balls.
    std::optional<mpq_class> r_eff;
    long double              r_value  = 0;
    long double              residual = 0;  // floating-point solves only
    // p_esc * 2k * R_eff == 1 (exactly in rational mode).
    bool identity = true;
  };

  struct SolveOptions {
    // Stored nonzeros allowed during exact elimination before falling back
    // to conjugate gradients.
    std::size_t fill_limit = 40'000'000;
    bool        force_float = false;
  };

  // Probability of hitting the frontier before returning to the base.
  EscapeEntry escape_exact(CosetBall const& ball, SolveOptions const& options = {});
  // Fills r_eff (and r_value) for an entry of the same ball.
  void resistance(CosetBall const& ball, EscapeEntry& entry, SolveOptions const& options = {});
  // Both, plus the identity check.
  EscapeEntry escape_and_resistance(CosetBall const& ball, SolveOptions const& options = {});

  enum class WalkVerdict { Transience, Recurrence, Inconclusive };
  std::string_view to_string(WalkVerdict verdict);

  struct EscapeProfile {
    std::vector<EscapeEntry> entries;
    bool                     monotone  = true;
    bool                     identity  = true;
    WalkVerdict              verdict   = WalkVerdict::Inconclusive;
    std::string              reason;
    // Extrapolated lower estimate of lim p_esc for transience evidence.
    std::optional<long double> limit;
  };

  // Applies the evidence rule to a finished list of entries.
  void classify(EscapeProfile& profile);

  EscapeProfile transience_profile(Subgroup const& subgroup, std::vector<std::size_t> radii,
                                   std::size_t budget = kDefaultBudget,
                                   SolveOptions const& options = {});

  struct EmbeddingSpec {
    Word        c;
    Word        h0;
    Word        a;  // c h0 c^-1, reduced, over the generators
    Word        b;  // c^2 h0 c^-2
    std::size_t lambda_prime = 0;
  };

  // Throws MembershipFailed when h0 is not in H, ValidationError when h0 is
  // trivial or H = 1.
  EmbeddingSpec make_embedding_spec(Subgroup const& subgroup, Word const& c, Word const& h0,
                                    std::size_t budget = kDefaultBudget);

  struct EmbeddingReport {
    std::size_t radius     = 0;
    std::size_t elements   = 0;
    std::size_t pairs      = 0;
    std::size_t violations = 0;  // d_Y > lambda' d_F
    mpq_class   lambda_emp;
    bool        injective  = true;  // lambda_emp > 0
    bool        uses_core  = false;
    // Pair attaining lambda_emp, as words over {a, b}.
    std::string witness_f1, witness_f2;
  };

  // Sandwich check for the map f -> H f(a, b) over the radius ball of F(a, b).
  EmbeddingReport build_embedding(Subgroup const& subgroup, EmbeddingSpec const& spec,
                                  std::size_t radius, std::size_t budget = kDefaultBudget);

  struct FreeProductCheck {
    bool        ok       = true;
    std::size_t products = 0;
    Word        witness;  // trivial alternating product when !ok
  };

  // Searches alternating products h1 c^e1 h2 c^e2 ... of total length at
  // most length_bound for one that is trivial in G.
  FreeProductCheck free_product_sanity(Subgroup const& subgroup, Word const& c,
                                       std::size_t length_bound,
                                       std::size_t budget = kDefaultBudget);

}  // namespace relcay
