#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace relcay::detail {

  // Symmetric system with integer coefficients: off-diagonal entries are
  // stored on both rows.
  struct IntegerSystem {
    std::vector<std::int64_t>                                   diagonal;
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> offdiag;
    std::vector<std::int64_t>                                   rhs;

    explicit IntegerSystem(std::size_t n = 0) : diagonal(n, 0), offdiag(n), rhs(n, 0) {}
    std::size_t size() const noexcept {
      return diagonal.size();
    }
    // Adds c to the (i, j) and (j, i) entries.
    void add_symmetric(std::uint32_t i, std::uint32_t j, std::int64_t c);
  };

  // Gaussian elimination in the given variable order. Returns nullopt when
  // the stored nonzeros would exceed fill_limit. Throws SingularSystem.
  std::optional<std::vector<mpq_class>> solve_exact(IntegerSystem const&          system,
                                                    std::span<std::uint32_t const> order,
                                                    std::size_t                    fill_limit);

  struct FloatSolution {
    std::vector<long double> x;
    long double              residual = 0;  // max-norm, relative to max(1, |b|)
  };

  // Conjugate gradients for a positive definite system; throws
  // SingularSystem when the residual stays above tolerance.
  FloatSolution solve_cg(IntegerSystem const& system, long double tolerance = 1e-12L);

}  // namespace relcay::detail
