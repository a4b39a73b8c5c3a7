#include "relcay/detail/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "relcay/errors.hpp"

namespace relcay::detail {

  namespace {

    std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
      std::int64_t r;
      if (__builtin_mul_overflow(a, b, &r)) {
        throw Error("integer overflow in lattice arithmetic");
      }
      return r;
    }

    void axpy(IntVector& y, std::int64_t a, IntVector const& x) {
      for (std::size_t i = 0; i < y.size(); ++i) {
        std::int64_t r;
        if (__builtin_sub_overflow(y[i], checked_mul(a, x[i]), &r)) {
          throw Error("integer overflow in lattice arithmetic");
        }
        y[i] = r;
      }
    }

    std::int64_t floor_div(std::int64_t a, std::int64_t b) {
      std::int64_t q = a / b;
      if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
      }
      return q;
    }

  }  // namespace

  EchelonForm echelon(std::vector<IntVector> const& input, std::size_t width) {
    std::size_t const    n = input.size();
    std::vector<IntVector> rows = input;
    std::vector<IntVector> tr(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      tr[i][i] = 1;
      rows[i].resize(width, 0);
    }

    EchelonForm form;
    std::size_t top = 0;
    for (std::size_t col = 0; col < width && top < n; ++col) {
      // Euclid on column col among rows top..n-1.
      while (true) {
        std::size_t best = n;
        for (std::size_t i = top; i < n; ++i) {
          if (rows[i][col] != 0
              && (best == n
                  || std::abs(rows[i][col]) < std::abs(rows[best][col]))) {
            best = i;
          }
        }
        if (best == n) {
          break;
        }
        std::swap(rows[top], rows[best]);
        std::swap(tr[top], tr[best]);
        bool done = true;
        for (std::size_t i = top + 1; i < n; ++i) {
          if (rows[i][col] != 0) {
            std::int64_t q = rows[i][col] / rows[top][col];
            axpy(rows[i], q, rows[top]);
            axpy(tr[i], q, tr[top]);
            if (rows[i][col] != 0) {
              done = false;
            }
          }
        }
        if (done) {
          break;
        }
      }
      if (rows[top][col] == 0) {
        continue;
      }
      if (rows[top][col] < 0) {
        for (auto& x : rows[top]) {
          x = -x;
        }
        for (auto& x : tr[top]) {
          x = -x;
        }
      }
      std::int64_t p = rows[top][col];
      for (std::size_t i = 0; i < top; ++i) {
        std::int64_t q = floor_div(rows[i][col], p);
        if (q != 0) {
          axpy(rows[i], q, rows[top]);
          axpy(tr[i], q, tr[top]);
        }
      }
      form.pivot_columns.push_back(col);
      ++top;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i < top) {
        form.rows.push_back(rows[i]);
        form.transform.push_back(tr[i]);
      } else {
        form.relations.push_back(tr[i]);
      }
    }
    return form;
  }

  Lattice::Lattice(std::vector<IntVector> const& generators, std::size_t width)
      : _width(width),
        _generators(generators.size()),
        _form(echelon(generators, width)) {}

  IntVector Lattice::reduce(IntVector v) const {
    v.resize(_width, 0);
    for (std::size_t i = 0; i < _form.rows.size(); ++i) {
      std::size_t  c = _form.pivot_columns[i];
      std::int64_t q = floor_div(v[c], _form.rows[i][c]);
      if (q != 0) {
        axpy(v, q, _form.rows[i]);
      }
    }
    return v;
  }

  std::optional<IntVector> Lattice::solve(IntVector const& target) const {
    IntVector v = target;
    v.resize(_width, 0);
    IntVector coeff(_form.rows.size(), 0);
    for (std::size_t i = 0; i < _form.rows.size(); ++i) {
      std::size_t  c = _form.pivot_columns[i];
      std::int64_t p = _form.rows[i][c];
      if (v[c] % p != 0) {
        return std::nullopt;
      }
      coeff[i] = v[c] / p;
      axpy(v, coeff[i], _form.rows[i]);
    }
    if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) {
      return std::nullopt;
    }
    IntVector result(_generators, 0);
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      for (std::size_t j = 0; j < _generators; ++j) {
        result[j] += checked_mul(coeff[i], _form.transform[i][j]);
      }
    }
    return result;
  }

  std::vector<IntVector> integer_kernel(std::vector<IntVector> const& rows,
                                        std::size_t                   width) {
    // Row-reduce the transpose; vanishing combinations of its rows are the
    // kernel vectors.
    std::vector<IntVector> transpose(width, IntVector(rows.size(), 0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < width && j < rows[i].size(); ++j) {
        transpose[j][i] = rows[i][j];
      }
    }
    return echelon(transpose, rows.size()).relations;
  }

}  // namespace relcay::detail
