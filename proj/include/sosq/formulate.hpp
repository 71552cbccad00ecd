#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sosq/groebner.hpp"
#include "sosq/newton.hpp"
#include "sosq/polynomial.hpp"
#include "sosq/sdp.hpp"

namespace sosq {

struct FormulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One unknown multiplier l_i paired with its generator h_i; the multiplier is
/// a linear combination of the listed monomials.
struct MultiplierSlot {
  QPoly generator;
  std::vector<Monomial> monomials;
};

struct GramObjective {
  enum class Kind { None, Trace, Linear };
  Kind kind = Kind::None;
  std::vector<Rational> param_coeffs;  // Linear: minimize sum_k coeff_k * p_k
};

/// A coefficient-matching row: <gram part, Q> + sum free_part * u = rhs,
/// where u stacks parameters first, then multiplier coefficients.
struct GramRow {
  Monomial label;
  std::map<std::pair<int, int>, Rational> gram;  // key (i <= j)
  std::map<int, Rational> free_part;
  Rational rhs;
};

/// The exact linear-constraint encoding of  v'Qv = target + sum_k p_k f_k +
/// sum_i l_i h_i  (reduced by the ideal when present), plus bookkeeping to
/// decode SDP solutions back into Gram/parameter/multiplier values.
struct GramProblem {
  Ring ring;
  QPoly target;
  std::vector<Monomial> basis;
  std::optional<GroebnerBasis> ideal;
  std::vector<std::string> param_names;
  std::vector<QPoly> param_polys;
  std::vector<MultiplierSlot> multipliers;
  bool trace_one = false;
  GramObjective objective;
  std::vector<GramRow> rows;  // semantic rows only (no trace normalization)

  int num_params() const { return static_cast<int>(param_names.size()); }
  int num_free() const {
    int n = num_params();
    for (const auto& s : multipliers) n += static_cast<int>(s.monomials.size());
    return n;
  }
  /// Index of the first coefficient of multiplier slot `i` in the free vector.
  int slot_offset(int i) const {
    int off = num_params();
    for (int k = 0; k < i; ++k) off += static_cast<int>(multipliers[k].monomials.size());
    return off;
  }
};

/// Basis candidates for a Gram representation of polynomials drawn from the
/// given supports: without an ideal, monomials m of degree <= two_d/2 with 2m
/// in the Newton polytope of the combined support; with an ideal, the standard
/// monomials of degree <= two_d/2.
inline std::vector<Monomial> monomial_basis_from_support(
    const Ring& ring, const std::vector<Monomial>& support, int two_d,
    const std::optional<GroebnerBasis>& ideal) {
  if (two_d < 0 || two_d % 2 != 0)
    throw FormulationError("degree bound 2d must be a nonnegative even integer");
  const int d = two_d / 2;
  if (ideal) return standard_monomials(*ideal, d);
  std::vector<Monomial> out;
  for (const auto& m : monomials_up_to_degree(ring.nvars(), d))
    if (newton_polytope_admits(m, support)) out.push_back(m);
  return out;
}

inline std::vector<Monomial> monomial_basis(const QPoly& f, int two_d,
                                            const std::optional<GroebnerBasis>& ideal = {}) {
  if (!ideal) {
    if (two_d % 2 != 0) throw FormulationError("degree bound 2d must be even");
    if (two_d < f.degree()) throw FormulationError("degree bound 2d is below deg f");
  }
  std::vector<Monomial> support;
  for (const auto& [m, c] : f.terms()) support.push_back(m);
  return monomial_basis_from_support(f.ring(), support, two_d, ideal);
}

namespace detail {

inline QPoly reduce_if(const QPoly& f, const std::optional<GroebnerBasis>& ideal) {
  return ideal ? normal_form(f, *ideal) : f;
}

}  // namespace detail

/// Builds the exact rows and the float SDP. The SDP's first (only) PSD block is
/// the Gram matrix; parameters and multiplier coefficients are free variables.
inline std::pair<GramProblem, SDPInstance> build_gram_problem(
    Ring ring, QPoly target, std::vector<Monomial> basis,
    std::optional<GroebnerBasis> ideal = {}, std::vector<std::string> param_names = {},
    std::vector<QPoly> param_polys = {}, std::vector<MultiplierSlot> multipliers = {},
    GramObjective objective = {}, bool trace_one = false) {
  if (basis.empty()) throw FormulationError("empty monomial basis");
  if (param_names.size() != param_polys.size())
    throw FormulationError("parameter name/polynomial count mismatch");
  if (objective.kind == GramObjective::Kind::Linear &&
      objective.param_coeffs.size() != param_names.size())
    throw FormulationError("objective coefficient count mismatch");

  GramProblem prob;
  prob.ring = ring;
  prob.target = target;
  prob.basis = basis;
  prob.ideal = ideal;
  prob.param_names = param_names;
  prob.param_polys = param_polys;
  prob.multipliers = multipliers;
  prob.objective = objective;
  prob.trace_one = trace_one;

  const int N = static_cast<int>(basis.size());
  std::map<Monomial, GramRow, GrevlexGreater> rowmap;
  auto row_of = [&](const Monomial& m) -> GramRow& {
    auto it = rowmap.find(m);
    if (it == rowmap.end()) {
      GramRow r;
      r.label = m;
      r.rhs = 0;
      it = rowmap.emplace(m, std::move(r)).first;
    }
    return it->second;
  };

  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      QPoly prod = detail::reduce_if(
          QPoly::monomial_term(ring, basis[i] * basis[j], Rational(1)), ideal);
      Rational mult = (i == j) ? 1 : 2;
      for (const auto& [m, c] : prod.terms()) {
        auto& row = row_of(m);
        auto key = std::make_pair(i, j);
        row.gram[key] += mult * c;
        if (row.gram[key] == 0) row.gram.erase(key);
      }
    }
  {
    QPoly t = detail::reduce_if(target, ideal);
    for (const auto& [m, c] : t.terms()) row_of(m).rhs += c;
  }
  for (size_t k = 0; k < param_polys.size(); ++k) {
    QPoly fk = detail::reduce_if(param_polys[k], ideal);
    for (const auto& [m, c] : fk.terms()) {
      auto& row = row_of(m);
      row.free_part[static_cast<int>(k)] -= c;
      if (row.free_part[static_cast<int>(k)] == 0) row.free_part.erase(static_cast<int>(k));
    }
  }
  for (size_t s = 0; s < multipliers.size(); ++s) {
    int off = prob.slot_offset(static_cast<int>(s));
    for (size_t j = 0; j < multipliers[s].monomials.size(); ++j) {
      QPoly hm = detail::reduce_if(
          QPoly::monomial_term(ring, multipliers[s].monomials[j], Rational(1)) *
              multipliers[s].generator,
          ideal);
      int idx = off + static_cast<int>(j);
      for (const auto& [m, c] : hm.terms()) {
        auto& row = row_of(m);
        row.free_part[idx] -= c;
        if (row.free_part[idx] == 0) row.free_part.erase(idx);
      }
    }
  }

  for (auto& [m, row] : rowmap) {
    if (row.gram.empty() && row.free_part.empty()) {
      if (row.rhs != 0)
        throw FormulationError("monomial not representable: " +
                               QPoly::monomial_term(ring, m, Rational(1)).to_string());
      continue;  // trivially satisfied row; drop below
    }
    prob.rows.push_back(row);
  }

  // Assemble the float SDP.
  const int P = prob.num_free();
  int m_total = static_cast<int>(prob.rows.size()) + (trace_one ? 1 : 0);
  SDPInstance inst;
  inst.block_sizes = {N};
  inst.rhs = Eigen::VectorXd::Zero(m_total);
  inst.free_coeffs = Eigen::MatrixXd::Zero(m_total, P);
  inst.free_objective = Eigen::VectorXd::Zero(P);
  inst.objective = SymmBlockMatrix::zero(inst.block_sizes);
  for (int r = 0; r < static_cast<int>(prob.rows.size()); ++r) {
    const GramRow& row = prob.rows[r];
    SymmBlockMatrix A = SymmBlockMatrix::zero(inst.block_sizes);
    for (const auto& [ij, c] : row.gram) {
      auto [i, j] = ij;
      double v = to_double(c);
      if (i == j)
        A.blocks[0](i, i) = v;
      else {
        A.blocks[0](i, j) = v / 2;
        A.blocks[0](j, i) = v / 2;
      }
    }
    for (const auto& [k, c] : row.free_part) inst.free_coeffs(r, k) = to_double(c);
    inst.rhs(r) = to_double(row.rhs);
    inst.constraints.push_back(std::move(A));
  }
  if (trace_one) {
    SymmBlockMatrix A = SymmBlockMatrix::identity(inst.block_sizes);
    inst.constraints.push_back(std::move(A));
    inst.rhs(m_total - 1) = 1.0;
  }
  if (objective.kind == GramObjective::Kind::Trace) {
    inst.objective = SymmBlockMatrix::identity(inst.block_sizes);
  } else if (objective.kind == GramObjective::Kind::Linear) {
    for (int k = 0; k < prob.num_params(); ++k)
      inst.free_objective(k) = to_double(objective.param_coeffs[k]);
  }
  return {std::move(prob), std::move(inst)};
}

/// Float-side decoding of a feasible solution.
struct GramDecode {
  Eigen::MatrixXd gram;
  Eigen::VectorXd free_values;
  Eigen::MatrixXd moment;
};

inline GramDecode decode_gram(const GramProblem& prob, const SDPSolution& sol) {
  GramDecode d;
  const int N = static_cast<int>(prob.basis.size());
  if (sol.X.blocks.empty() || sol.X.blocks[0].rows() != N)
    throw std::invalid_argument("decode_gram: solution does not match problem");
  d.gram = 0.5 * (sol.X.blocks[0] + sol.X.blocks[0].transpose());
  d.moment = 0.5 * (sol.Z.blocks[0] + sol.Z.blocks[0].transpose());
  d.free_values = sol.free_values;
  return d;
}

/// Upper-triangle packing used by the index map (i <= j, row-major).
inline int gram_pack_index(int i, int j, int N) {
  if (i > j) std::swap(i, j);
  return i * N - i * (i - 1) / 2 + (j - i);
}
inline Eigen::VectorXd gram_pack(const Eigen::MatrixXd& Q) {
  const int N = static_cast<int>(Q.rows());
  Eigen::VectorXd v(N * (N + 1) / 2);
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) v(gram_pack_index(i, j, N)) = Q(i, j);
  return v;
}
inline Eigen::MatrixXd gram_unpack(const Eigen::VectorXd& v, int N) {
  Eigen::MatrixXd Q(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) Q(i, j) = Q(j, i) = v(gram_pack_index(i, j, N));
  return Q;
}

}  // namespace sosq
