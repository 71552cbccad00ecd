#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sosq/formulate.hpp"
#include "sosq/qmatrix.hpp"
#include "sosq/sos_poly.hpp"

namespace sosq {

/// P'QP = LDL' with pivoting by greatest remaining diagonal entry.
/// On failure, witness satisfies w'Qw < 0 exactly.
struct LDLTResult {
  bool psd = false;
  std::vector<int> perm;  // perm[k] = original index placed at pivot position k
  QMatrix L;              // unit lower triangular, pivoted coordinates
  std::vector<Rational> D;
  std::vector<Rational> witness;  // original coordinates; empty iff psd
};

inline LDLTResult exact_ldlt(const QMatrix& Qin) {
  const int n = Qin.rows();
  if (Qin.cols() != n) throw std::invalid_argument("exact_ldlt: matrix not square");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (Qin(i, j) != Qin(j, i)) throw std::invalid_argument("exact_ldlt: matrix not symmetric");

  LDLTResult res;
  res.perm.resize(n);
  for (int i = 0; i < n; ++i) res.perm[i] = i;
  res.L = QMatrix::identity(n);
  res.D.assign(n, Rational(0));
  QMatrix W = Qin;

  auto swap_pivot = [&](int k, int r) {
    if (k == r) return;
    for (int c = 0; c < n; ++c) std::swap(W(k, c), W(r, c));
    for (int c = 0; c < n; ++c) std::swap(W(c, k), W(c, r));
    for (int c = 0; c < k; ++c) std::swap(res.L(k, c), res.L(r, c));
    std::swap(res.perm[k], res.perm[r]);
  };

  // Lift a trailing-coordinate direction c to the full space so that
  // w'Qw equals c'Sc for the current Schur complement S.
  auto make_witness = [&](int k, const std::vector<Rational>& c_tail) {
    std::vector<Rational> w(n, Rational(0));
    for (int i = k; i < n; ++i) w[i] = c_tail[i - k];
    for (int i = k - 1; i >= 0; --i) {
      Rational acc(0);
      for (int j = i + 1; j < n; ++j) acc += res.L(j, i) * w[j];
      w[i] = -acc;  // solves L1' u = -L2' c by back substitution
    }
    std::vector<Rational> orig(n, Rational(0));
    for (int i = 0; i < n; ++i) orig[res.perm[i]] = w[i];
    res.witness = std::move(orig);
    res.psd = false;
  };

  for (int k = 0; k < n; ++k) {
    int r = k;
    for (int i = k + 1; i < n; ++i)
      if (W(i, i) > W(r, r)) r = i;
    swap_pivot(k, r);
    const Rational d = W(k, k);
    if (d < 0) {
      std::vector<Rational> c(n - k, Rational(0));
      c[0] = 1;
      make_witness(k, c);
      return res;
    }
    if (d == 0) {
      int bad = -1;
      for (int j = k + 1; j < n; ++j)
        if (W(k, j) != 0) {
          bad = j;
          break;
        }
      if (bad >= 0) {
        // 2x2 block [[0, s],[s, t]] with t <= 0: direction (a, 1) with 2as + t < 0.
        const Rational s = W(k, bad);
        const Rational t = W(bad, bad);
        Rational a = -(1 + abs(t)) / (2 * s);
        std::vector<Rational> c(n - k, Rational(0));
        c[0] = a;
        c[bad - k] = 1;
        make_witness(k, c);
        return res;
      }
      res.D[k] = 0;
      continue;
    }
    res.D[k] = d;
    for (int i = k + 1; i < n; ++i) res.L(i, k) = W(i, k) / d;
    for (int i = k + 1; i < n; ++i) {
      if (W(i, k) == 0) continue;
      for (int j = k + 1; j < n; ++j) W(i, j) -= res.L(i, k) * W(k, j);
    }
    for (int i = k + 1; i < n; ++i) {
      W(i, k) = 0;
      W(k, i) = 0;
    }
  }
  res.psd = true;
  return res;
}

/// An exact PSD Gram matrix for the (parameter-fixed) constraint system.
struct RationalGram {
  QMatrix Q;
  std::vector<Monomial> basis;
  std::vector<Rational> free_values;  // parameters then multiplier coefficients
  int precision = 0;                  // dyadic level 2^k that certified
};

namespace detail {

struct ProjectionSystem {
  // rows over packed upper-triangle unknowns q_ij (i <= j)
  std::vector<std::vector<Rational>> M;
  std::vector<Rational> rhs;
  std::vector<Rational> weights;         // Frobenius weights: 1 diagonal, 2 off-diagonal
  std::vector<std::pair<int, int>> keys;  // unknown -> (i, j)
};

inline ProjectionSystem make_projection_system(const GramProblem& prob,
                                               const std::vector<Rational>& frees) {
  const int N = static_cast<int>(prob.basis.size());
  ProjectionSystem sys;
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      sys.keys.emplace_back(i, j);
      sys.weights.push_back(i == j ? Rational(1) : Rational(2));
    }
  const int nq = static_cast<int>(sys.keys.size());
  for (const auto& row : prob.rows) {
    std::vector<Rational> r(nq, Rational(0));
    for (const auto& [ij, c] : row.gram) r[gram_pack_index(ij.first, ij.second, N)] = c;
    Rational rhs = row.rhs;
    for (const auto& [k, c] : row.free_part) rhs -= c * frees.at(k);
    sys.M.push_back(std::move(r));
    sys.rhs.push_back(rhs);
  }
  return sys;
}

/// Weighted orthogonal projection of q0 onto {q : M q = rhs}; nullopt when the
/// system is inconsistent.
inline std::optional<std::vector<Rational>> project_affine(const ProjectionSystem& sys,
                                                           const std::vector<Rational>& q0) {
  const int s = static_cast<int>(sys.M.size());
  const int nq = static_cast<int>(q0.size());
  QMatrix G(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b) {
      Rational acc(0);
      for (int u = 0; u < nq; ++u) {
        if (sys.M[a][u] == 0 || sys.M[b][u] == 0) continue;
        acc += sys.M[a][u] * sys.M[b][u] / sys.weights[u];
      }
      G(a, b) = acc;
      G(b, a) = acc;
    }
  std::vector<Rational> rhs(s);
  for (int a = 0; a < s; ++a) {
    Rational acc = sys.rhs[a];
    for (int u = 0; u < nq; ++u) acc -= sys.M[a][u] * q0[u];
    rhs[a] = acc;
  }
  auto lam = solve_linear_system(G, rhs);
  if (!lam) return std::nullopt;
  std::vector<Rational> q = q0;
  for (int u = 0; u < nq; ++u) {
    Rational acc(0);
    for (int a = 0; a < s; ++a) {
      if (sys.M[a][u] == 0 || (*lam)[a] == 0) continue;
      acc += sys.M[a][u] * (*lam)[a];
    }
    q[u] += acc / sys.weights[u];
  }
  for (int a = 0; a < s; ++a) {
    Rational acc(0);
    for (int u = 0; u < nq; ++u) acc += sys.M[a][u] * q[u];
    if (acc != sys.rhs[a]) return std::nullopt;  // dependent-but-inconsistent row set
  }
  return q;
}

}  // namespace detail

/// Peyrl-Parrilo style rationalization: free scalars are rounded once at
/// denominator 2^round_tol and held fixed; the Gram matrix is rounded at
/// denominators 2^k for k = 1..round_tol, projected exactly onto the affine
/// constraint slice, and accepted at the first k whose projection is exactly
/// PSD (and nonzero, when required).
inline std::optional<RationalGram> rationalize(const Eigen::MatrixXd& gram_float,
                                               const Eigen::VectorXd& free_float,
                                               const GramProblem& prob, int round_tol,
                                               bool require_nonzero = false) {
  const int N = static_cast<int>(prob.basis.size());
  if (gram_float.rows() != N || gram_float.cols() != N)
    throw std::invalid_argument("rationalize: gram size mismatch");
  if (free_float.size() != prob.num_free())
    throw std::invalid_argument("rationalize: free value count mismatch");
  if (round_tol < 1) return std::nullopt;

  std::vector<Rational> frees;
  for (int k = 0; k < free_float.size(); ++k) {
    auto r = round_to_dyadic(free_float(k), round_tol);
    if (!r) return std::nullopt;
    frees.push_back(*r);
  }
  detail::ProjectionSystem sys = detail::make_projection_system(prob, frees);
  // A row with no Gram unknowns must already hold at the fixed free values.
  for (size_t a = 0; a < sys.M.size(); ++a) {
    bool zero = true;
    for (const auto& c : sys.M[a])
      if (c != 0) {
        zero = false;
        break;
      }
    if (zero && sys.rhs[a] != 0) return std::nullopt;
  }

  Eigen::MatrixXd sym = 0.5 * (gram_float + gram_float.transpose());
  for (int k = 1; k <= round_tol; ++k) {
    std::vector<Rational> q0;
    q0.reserve(sys.keys.size());
    bool ok = true;
    for (auto [i, j] : sys.keys) {
      auto r = round_to_dyadic(sym(i, j), k);
      if (!r) {
        ok = false;
        break;
      }
      q0.push_back(*r);
    }
    if (!ok) continue;
    auto q = detail::project_affine(sys, q0);
    if (!q) continue;
    QMatrix Q(N, N);
    for (size_t u = 0; u < sys.keys.size(); ++u) {
      auto [i, j] = sys.keys[u];
      Q(i, j) = (*q)[u];
      Q(j, i) = (*q)[u];
    }
    if (require_nonzero && Q.is_zero()) continue;
    LDLTResult ldlt = exact_ldlt(Q);
    if (!ldlt.psd) continue;
    RationalGram rg;
    rg.Q = std::move(Q);
    rg.basis = prob.basis;
    rg.free_values = std::move(frees);
    rg.precision = k;
    return rg;
  }
  return std::nullopt;
}

/// Weighted-square decomposition of v'Qv from the exact LDL' factorization.
inline SOSPoly extract_sos(const RationalGram& rg, const Ring& ring) {
  LDLTResult f = exact_ldlt(rg.Q);
  if (!f.psd) throw std::logic_error("extract_sos: gram matrix not certified PSD");
  const int n = rg.Q.rows();
  std::vector<Rational> weights;
  std::vector<QPoly> gens;
  for (int k = 0; k < n; ++k) {
    if (f.D[k] == 0) continue;
    QPoly g(ring);
    for (int i = k; i < n; ++i) {
      if (f.L(i, k) == 0) continue;
      g += QPoly::monomial_term(ring, rg.basis[f.perm[i]], f.L(i, k));
    }
    weights.push_back(f.D[k]);
    gens.push_back(std::move(g));
  }
  return SOSPoly(std::move(weights), std::move(gens));
}

/// Exact check of  expand(s) == target + sum_i l_i h_i  modulo the ideal.
inline bool verify_certificate(const SOSPoly& s, const QPoly& target,
                               const std::optional<GroebnerBasis>& ideal = {},
                               const std::vector<std::pair<QPoly, QPoly>>& multiplier_terms = {}) {
  QPoly diff = expand_sos(s, target.ring()) - target;
  for (const auto& [l, h] : multiplier_terms) diff -= l * h;
  if (ideal) diff = normal_form(diff, *ideal);
  return diff.is_zero();
}

}  // namespace sosq
