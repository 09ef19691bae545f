#pragma once

#include <stdexcept>
#include <vector>

#include "coneproc/rational.hpp"

namespace coneproc {

// Scalar requirements for the exact simplex: an ordered field with decidable
// sign. Specialized for Rational here and for number-field elements in
// number_field.hpp.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static int sign(const Rational& x) { return sgn(x); }
  static Rational zeroLike(const Rational&) { return Rational(0); }
  static Rational oneLike(const Rational&) { return Rational(1); }
};

template <class S>
struct ConicFeasibility {
  bool feasible = false;
  std::vector<S> solution;  // x with A x = b, x >= 0 (when feasible)
  std::vector<S> farkas;    // y with yT A <= 0, yT b > 0 (when infeasible)
};

// Decides existence of x >= 0 with A x = b by a phase-1 simplex under
// Bland's rule (no cycling, hence guaranteed termination). Exact over any
// ordered field; an exemplar value supplies zero/one for scalar types that
// carry context.
template <class S>
ConicFeasibility<S> solveNonnegative(const std::vector<std::vector<S>>& rowsA,
                                     const std::vector<S>& b,
                                     const S& exemplar) {
  using T = ScalarTraits<S>;
  const int m = static_cast<int>(rowsA.size());
  const int nx = m == 0 ? 0 : static_cast<int>(rowsA[0].size());
  const S zero = T::zeroLike(exemplar);
  const S one = T::oneLike(exemplar);

  ConicFeasibility<S> out;
  if (static_cast<int>(b.size()) != m)
    throw std::invalid_argument("solveNonnegative: rhs size");
  if (m == 0) {
    out.feasible = true;
    out.solution.assign(nx, zero);
    return out;
  }

  const int cols = nx + m + 1;  // x vars, artificials, rhs
  std::vector<std::vector<S>> t(m, std::vector<S>(cols, zero));
  std::vector<int> flip(m, 1);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rowsA[i].size()) != nx)
      throw std::invalid_argument("solveNonnegative: ragged rows");
    flip[i] = T::sign(b[i]) < 0 ? -1 : 1;
    for (int j = 0; j < nx; ++j)
      t[i][j] = flip[i] < 0 ? zero - rowsA[i][j] : rowsA[i][j];
    t[i][nx + i] = one;
    t[i][cols - 1] = flip[i] < 0 ? zero - b[i] : b[i];
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = nx + i;

  // Reduced-cost row for the phase-1 objective (minimize the artificials).
  std::vector<S> z(cols, zero);
  for (int j = 0; j < nx; ++j)
    for (int i = 0; i < m; ++i) z[j] = z[j] - t[i][j];
  for (int i = 0; i < m; ++i) z[cols - 1] = z[cols - 1] - t[i][cols - 1];

  while (true) {
    int enter = -1;
    for (int j = 0; j < cols - 1; ++j) {
      if (T::sign(z[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    for (int i = 0; i < m; ++i) {
      if (T::sign(t[i][enter]) <= 0) continue;
      if (leave < 0) {
        leave = i;
        continue;
      }
      // ratio(i) vs ratio(leave) via cross-multiplication; ties by the
      // smallest basis index (Bland).
      S diff = t[i][cols - 1] * t[leave][enter] -
               t[leave][cols - 1] * t[i][enter];
      int s = T::sign(diff);
      if (s < 0 || (s == 0 && basis[i] < basis[leave])) leave = i;
    }
    if (leave < 0)
      throw std::logic_error("phase-1 simplex unbounded");  // cannot happen

    S piv = t[leave][enter];
    for (int j = 0; j < cols; ++j) t[leave][j] = t[leave][j] / piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || T::sign(t[i][enter]) == 0) continue;
      S f = t[i][enter];
      for (int j = 0; j < cols; ++j) t[i][j] = t[i][j] - f * t[leave][j];
    }
    if (T::sign(z[enter]) != 0) {
      S f = z[enter];
      for (int j = 0; j < cols; ++j) z[j] = z[j] - f * t[leave][j];
    }
    basis[leave] = enter;
  }

  // Optimal value is -z[rhs]; zero means the artificials vanished.
  if (T::sign(z[cols - 1]) == 0) {
    out.feasible = true;
    out.solution.assign(nx, zero);
    for (int i = 0; i < m; ++i)
      if (basis[i] < nx) out.solution[basis[i]] = t[i][cols - 1];
    return out;
  }

  out.feasible = false;
  out.farkas.assign(m, zero);
  for (int i = 0; i < m; ++i) {
    S yi = one - z[nx + i];
    out.farkas[i] = flip[i] < 0 ? zero - yi : yi;
  }
  return out;
}

}  // namespace coneproc
