#pragma once

// Small integer lattices: Hermite normal form with transform tracking. Used
// for exponent-sum invariants, abelian membership and canonical coset keys.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace relcay::detail {

  using IntVector = std::vector<std::int64_t>;

  struct EchelonForm {
    // Nonzero rows in row echelon form with positive pivots; entries above a
    // pivot are reduced into [0, pivot).
    std::vector<IntVector>   rows;
    std::vector<std::size_t> pivot_columns;
    // rows[i] = sum_j transform[i][j] * input[j].
    std::vector<IntVector> transform;
    // Integer combinations of the input rows that vanish, a basis of the
    // relation lattice.
    std::vector<IntVector> relations;
  };

  EchelonForm echelon(std::vector<IntVector> const& input, std::size_t width);

  class Lattice {
   public:
    Lattice() = default;
    Lattice(std::vector<IntVector> const& generators, std::size_t width);

    std::size_t width() const noexcept {
      return _width;
    }
    std::size_t rank() const noexcept {
      return _form.rows.size();
    }

    // Canonical representative of v + L.
    IntVector reduce(IntVector v) const;

    // Coefficients c with v = sum c_i generators_i, when v is in L.
    std::optional<IntVector> solve(IntVector const& v) const;

   private:
    std::size_t _width       = 0;
    std::size_t _generators  = 0;
    EchelonForm _form;
  };

  // Integer basis of {x : M x = 0} where M has the given rows.
  std::vector<IntVector> integer_kernel(std::vector<IntVector> const& rows,
                                        std::size_t                   width);

}  // namespace relcay::detail
