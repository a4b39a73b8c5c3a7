#include "relcay/detail/linear_solver.hpp"

#include <algorithm>
#include <cmath>

#include "relcay/errors.hpp"

namespace relcay::detail {

  void IntegerSystem::add_symmetric(std::uint32_t i, std::uint32_t j, std::int64_t c) {
    auto bump = [c](auto& row, std::uint32_t col) {
      for (auto& [k, v] : row) {
        if (k == col) {
          v += c;
          return;
        }
      }
      row.emplace_back(col, c);
    };
    bump(offdiag[i], j);
    bump(offdiag[j], i);
  }

  namespace {

    using Row = std::vector<std::pair<std::uint32_t, mpq_class>>;

    mpq_class* find(Row& row, std::uint32_t col) {
      auto it = std::lower_bound(row.begin(), row.end(), col,
                                 [](auto const& e, std::uint32_t c) { return e.first < c; });
      return it != row.end() && it->first == col ? &it->second : nullptr;
    }

  }  // namespace

  std::optional<std::vector<mpq_class>> solve_exact(IntegerSystem const&          system,
                                                    std::span<std::uint32_t const> order,
                                                    std::size_t                    fill_limit) {
    std::size_t const n = system.size();
    if (order.size() != n) {
      throw Error("elimination order does not cover the system");
    }
    std::vector<Row>       rows(n);
    std::vector<mpq_class> rhs(n);
    std::size_t            stored = 0;
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].emplace_back(static_cast<std::uint32_t>(i), mpq_class(system.diagonal[i]));
      for (auto [j, c] : system.offdiag[i]) {
        if (c != 0) {
          rows[i].emplace_back(j, mpq_class(c));
        }
      }
      std::sort(rows[i].begin(), rows[i].end(),
                [](auto const& a, auto const& b) { return a.first < b.first; });
      rhs[i] = system.rhs[i];
      stored += rows[i].size();
    }
    if (stored > fill_limit) {
      return std::nullopt;
    }

    std::vector<char> done(n, 0);
    Row               merged;
    for (std::uint32_t v : order) {
      mpq_class* pivot = find(rows[v], v);
      if (!pivot || *pivot == 0) {
        throw SingularSystem("zero pivot at variable " + std::to_string(v));
      }
      mpq_class const a_vv = *pivot;
      for (auto const& [u, a_uv_ref] : rows[v]) {
        if (u == v || done[u]) {
          continue;
        }
        mpq_class* a_uv = find(rows[u], v);
        if (!a_uv) {
          continue;
        }
        mpq_class const factor = *a_uv / a_vv;
        rhs[u] -= factor * rhs[v];
        // rows[u] -= factor * rows[v], dropping column v.
        merged.clear();
        Row const& rv = rows[v];
        Row const& ru = rows[u];
        std::size_t i = 0, j = 0;
        while (i < ru.size() || j < rv.size()) {
          if (j == rv.size() || (i < ru.size() && ru[i].first < rv[j].first)) {
            if (ru[i].first != v) {
              merged.push_back(ru[i]);
            }
            ++i;
          } else if (i == ru.size() || rv[j].first < ru[i].first) {
            if (rv[j].first != v && !done[rv[j].first]) {
              merged.emplace_back(rv[j].first, -factor * rv[j].second);
            }
            ++j;
          } else {
            if (ru[i].first != v) {
              mpq_class x = ru[i].second - factor * rv[j].second;
              if (x != 0 || ru[i].first == u) {
                merged.emplace_back(ru[i].first, std::move(x));
              }
            }
            ++i;
            ++j;
          }
        }
        stored += merged.size();
        stored -= rows[u].size();
        rows[u].swap(merged);
        if (stored > fill_limit) {
          return std::nullopt;
        }
      }
      done[v] = 1;
    }

    std::vector<mpq_class> x(n);
    for (std::size_t idx = n; idx-- > 0;) {
      std::uint32_t v   = order[idx];
      mpq_class     acc = rhs[v];
      mpq_class     a_vv;
      for (auto const& [u, a] : rows[v]) {
        if (u == v) {
          a_vv = a;
        } else {
          acc -= a * x[u];
        }
      }
      x[v] = acc / a_vv;
    }
    return x;
  }

  FloatSolution solve_cg(IntegerSystem const& system, long double tolerance) {
    std::size_t const n   = system.size();
    auto              mul = [&](std::vector<long double> const& p, std::vector<long double>& out) {
      for (std::size_t i = 0; i < n; ++i) {
        long double s = system.diagonal[i] * p[i];
        for (auto [j, c] : system.offdiag[i]) {
          s += c * p[j];
        }
        out[i] = s;
      }
    };
    long double bnorm = 1;
    for (auto b : system.rhs) {
      bnorm = std::max(bnorm, std::fabs(static_cast<long double>(b)));
    }
    FloatSolution            sol;
    std::vector<long double> r(system.rhs.begin(), system.rhs.end()), p = r, ap(n);
    sol.x.assign(n, 0);
    long double rr = 0;
    for (auto v : r) {
      rr += v * v;
    }
    std::size_t const max_iter = 20 * n + 100;
    for (std::size_t it = 0; it < max_iter && rr > 0; ++it) {
      mul(p, ap);
      long double pap = 0;
      for (std::size_t i = 0; i < n; ++i) {
        pap += p[i] * ap[i];
      }
      if (pap <= 0) {
        throw SingularSystem("matrix is not positive definite");
      }
      long double const alpha = rr / pap;
      long double       next  = 0;
      for (std::size_t i = 0; i < n; ++i) {
        sol.x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
        next += r[i] * r[i];
      }
      if (std::sqrt(next) <= tolerance * bnorm * 1e-3L) {
        break;
      }
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = r[i] + next / rr * p[i];
      }
      rr = next;
    }
    // True residual, not the recursively updated one.
    mul(sol.x, ap);
    long double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::fabs(system.rhs[i] - ap[i]));
    }
    sol.residual = worst / bnorm;
    if (!(sol.residual <= tolerance)) {
      throw SingularSystem("iterative solve did not reach the residual tolerance");
    }
    return sol;
  }

}  // namespace relcay::detail
