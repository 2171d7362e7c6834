#pragma once

#include "thermo/log_linear.hpp"
#include "thermo/numeric.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace thermo {

/// Sign and zero tests for the scalar types the tableau runs on.
inline bool lp_positive(double v) { return v > 1e-12; }
inline bool lp_nonzero(double v) { return std::abs(v) > 1e-12; }
inline bool lp_positive(const Rational& v) { return v > 0; }
inline bool lp_nonzero(const Rational& v) { return v != 0; }
inline bool lp_positive(const LogLinear& v) { return !v.is_zero() && v.sign() > 0; }

template <class Value>
struct LpSolution {
  std::vector<Value> duals;  // one per row
  Value objective{};
  std::size_t pivots = 0;
};

/// Dense tableau simplex for max c·x s.t. A x = b, x ≥ 0, b ≥ 0.
///
/// `basis` names one identity column per row with zero cost; columns listed
/// in `artificial` are pivoted out first (their rows have b = 0) and never
/// re-enter. Bland's rule throughout. Constraint data are Coef, costs are
/// Value, so exact costs only ever meet exact rational multipliers.
template <class Coef, class Value>
LpSolution<Value> simplex_max(std::vector<std::vector<Coef>> a, std::vector<Coef> b, const std::vector<Value>& c,
                              std::vector<std::size_t> basis, const std::vector<bool>& artificial) {
  const std::size_t rows = a.size();
  const std::size_t cols = c.size();
  std::vector<Value> d = c;  // reduced costs; basic columns start at cost 0
  Value objective{};
  LpSolution<Value> sol;
  const std::vector<std::size_t> initial = basis;

  auto pivot = [&](std::size_t r, std::size_t e) {
    const Coef p = a[r][e];
    for (auto& x : a[r]) x /= p;
    b[r] /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || !lp_nonzero(a[i][e])) continue;
      const Coef k = a[i][e];
      for (std::size_t j = 0; j < cols; ++j)
        if (lp_nonzero(a[r][j])) a[i][j] -= k * a[r][j];
      a[i][e] = Coef(0);
      b[i] -= k * b[r];
    }
    if (!(d[e] == Value{})) {
      const Value k = d[e];
      for (std::size_t j = 0; j < cols; ++j)
        if (lp_nonzero(a[r][j])) d[j] -= k * a[r][j];
      d[e] = Value{};
      objective += k * b[r];
    }
    basis[r] = e;
    ++sol.pivots;
  };

  for (std::size_t r = 0; r < rows; ++r) {
    if (!artificial[basis[r]]) continue;
    for (std::size_t j = 0; j < cols; ++j)
      if (!artificial[j] && lp_nonzero(a[r][j])) {
        pivot(r, j);
        break;
      }
  }

  for (;;) {
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j < cols && !enter; ++j)
      if (!artificial[j] && lp_positive(d[j])) enter = j;
    if (!enter) break;
    std::optional<std::size_t> leave;
    Coef best{};
    for (std::size_t r = 0; r < rows; ++r) {
      if (!lp_positive(a[r][*enter])) continue;
      const Coef ratio = b[r] / a[r][*enter];
      if (!leave || ratio < best || (!(best < ratio) && basis[r] < basis[*leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (!leave) throw SpecError("linear program is unbounded");
    pivot(*leave, *enter);
  }

  // d_j = c_j − y·A_j on the original identity columns, whose cost is zero.
  for (std::size_t r = 0; r < rows; ++r) sol.duals.push_back(-d[initial[r]]);
  sol.objective = objective;
  return sol;
}

}  // namespace thermo
