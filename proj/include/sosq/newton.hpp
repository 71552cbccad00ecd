#pragma once

#include <vector>

#include "sosq/monomial.hpp"
#include "sosq/rational.hpp"

namespace sosq {

namespace detail {

/// Exact phase-1 simplex (Bland's rule) deciding feasibility of
///   sum_j lambda_j p_j = q, sum_j lambda_j = 1, lambda >= 0.
inline bool convex_hull_contains(const std::vector<std::vector<int>>& points,
                                 const std::vector<int>& query) {
  const int n = query.empty() ? 0 : static_cast<int>(query.size());
  const int k = static_cast<int>(points.size());
  if (k == 0) return false;
  const int rows = n + 1;          // n coordinates + the mass row
  const int cols = k + rows;       // lambdas + artificials
  // Tableau with artificial basis; minimize the sum of artificials.
  std::vector<std::vector<Rational>> T(rows, std::vector<Rational>(cols + 1, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) T[i][j] = points[j][i];
    T[i][cols] = query[i];
  }
  for (int j = 0; j < k; ++j) T[n][j] = 1;
  T[n][cols] = 1;
  for (int i = 0; i < rows; ++i) T[i][k + i] = 1;  // rhs >= 0 already (exponents)
  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[i] = k + i;

  // Reduced cost row for objective = sum of artificials.
  std::vector<Rational> z(cols + 1, Rational(0));
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c <= cols; ++c) z[c] += T[i][c];
  for (int i = 0; i < rows; ++i) z[k + i] -= 1;  // cost of artificial is 1

  for (;;) {
    int enter = -1;
    for (int c = 0; c < cols; ++c)
      if (z[c] > 0) {
        enter = c;  // Bland: smallest index with positive reduced profit
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Rational best_ratio(0);
    for (int i = 0; i < rows; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][cols] / T[i][enter];
      if (leave < 0 || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return false;  // unbounded phase-1 cannot happen; bail safely
    Rational piv = T[leave][enter];
    for (int c = 0; c <= cols; ++c) T[leave][c] /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rational f = T[i][enter];
      for (int c = 0; c <= cols; ++c) T[i][c] -= f * T[leave][c];
    }
    Rational fz = z[enter];
    for (int c = 0; c <= cols; ++c) z[c] -= fz * T[leave][c];
    basis[leave] = enter;
  }
  return z[cols] == 0;  // artificials driven to zero <=> feasible
}

}  // namespace detail

/// True iff 2*m lies in the convex hull of the support exponent vectors.
inline bool newton_polytope_admits(const Monomial& m, const std::vector<Monomial>& support) {
  std::vector<std::vector<int>> pts;
  pts.reserve(support.size());
  for (const auto& s : support) pts.push_back(s.exponents());
  std::vector<int> q = m.exponents();
  for (auto& e : q) e *= 2;
  return detail::convex_hull_contains(pts, q);
}

}  // namespace sosq
