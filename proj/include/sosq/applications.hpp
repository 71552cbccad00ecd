#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sosq/certify.hpp"
#include "sosq/formulate.hpp"
#include "sosq/sdp.hpp"
#include "sosq/sdpa_io.hpp"

namespace sosq {

enum class SolverChoice { Builtin, External };

struct SolveOptions {
  int round_tol = 3;  // rounding precision bound; negative means skip rounding
  bool trace_obj = false;
  SolverChoice solver = SolverChoice::Builtin;
  std::string solver_path;  // empty: consult SOS_SOLVER_PATH, then "csdp"
  std::string workdir;
  SolverOptions sdp;

  std::string resolved_solver_path() const {
    if (!solver_path.empty()) return solver_path;
    if (const char* env = std::getenv("SOS_SOLVER_PATH")) return env;
    return "csdp";
  }
};

/// User-facing result bundle of one Gram computation.
struct SDPResult {
  SolveStatus status = SolveStatus::Unknown;
  std::string message;
  Ring ring;
  std::vector<Monomial> basis;
  Eigen::MatrixXd gram_float;
  Eigen::MatrixXd moment;
  Eigen::VectorXd free_float;
  std::optional<RationalGram> gram_exact;
  std::vector<std::string> param_names;
  std::vector<Rational> params_exact;
  std::vector<QPoly> multipliers;  // exact after rounding
  bool rounded = false;
  int iterations = 0;
  GramProblem problem;

  bool certified() const { return status == SolveStatus::Feasible && rounded; }
};

inline SOSPoly sos_poly(const SDPResult& r) {
  if (!r.gram_exact) throw std::logic_error("sos_poly: no exact Gram matrix available");
  return extract_sos(*r.gram_exact, r.ring);
}

namespace detail {

inline SDPResult run_gram_pipeline(GramProblem prob, const SDPInstance& inst,
                                   const SolveOptions& opts, bool require_nonzero) {
  SDPResult out;
  out.ring = prob.ring;
  out.basis = prob.basis;
  out.param_names = prob.param_names;

  SDPSolution sol = (opts.solver == SolverChoice::External)
                        ? solve_external(inst, opts.resolved_solver_path(), opts.workdir)
                        : solve_builtin(inst, opts.sdp);
  out.status = sol.status;
  out.message = sol.message;
  out.iterations = sol.iterations;
  if (sol.status != SolveStatus::Feasible) {
    out.problem = std::move(prob);
    return out;
  }
  GramDecode dec = decode_gram(prob, sol);
  out.gram_float = dec.gram;
  out.moment = dec.moment;
  out.free_float = dec.free_values;

  if (opts.round_tol >= 0) {
    auto rg = rationalize(dec.gram, dec.free_values, prob, opts.round_tol, require_nonzero);
    if (rg) {
      out.rounded = true;
      out.gram_exact = rg;
      for (int k = 0; k < prob.num_params(); ++k) out.params_exact.push_back(rg->free_values[k]);
      for (size_t s = 0; s < prob.multipliers.size(); ++s) {
        int off = prob.slot_offset(static_cast<int>(s));
        QPoly l(prob.ring);
        for (size_t j = 0; j < prob.multipliers[s].monomials.size(); ++j)
          l += QPoly::monomial_term(prob.ring, prob.multipliers[s].monomials[j],
                                    rg->free_values[off + j]);
        out.multipliers.push_back(std::move(l));
      }
    } else {
      out.message = "rounding did not certify; returning the floating-point solution";
    }
  }
  out.problem = std::move(prob);
  return out;
}

/// An unmatched monomial means no Gram representation exists at this basis.
inline SDPResult infeasible_result(const Ring& ring, const std::string& why) {
  SDPResult r;
  r.ring = ring;
  r.status = SolveStatus::Infeasible;
  r.message = why;
  return r;
}

inline int default_two_d(const QPoly& f) {
  int d = std::max(f.degree(), 0);
  return d + (d % 2);
}

inline std::vector<Monomial> support_of(const QPoly& f) {
  std::vector<Monomial> s;
  for (const auto& [m, c] : f.terms()) s.push_back(m);
  return s;
}

/// Splits a polynomial affine in the trailing parameter variables into the
/// parameter-free part and the coefficient polynomial of each parameter; all
/// pieces live in the parameter-free subring.
struct ParametricSplit {
  Ring base_ring;
  QPoly constant_part;
  std::vector<QPoly> param_polys;
};

inline ParametricSplit split_parametric(const QPoly& f, const std::vector<std::string>& params) {
  const Ring& ext = f.ring();
  std::vector<int> pidx;
  for (const auto& name : params) {
    int i = ext.index_of(name);
    if (i < 0) throw std::invalid_argument("parameter '" + name + "' is not a ring variable");
    pidx.push_back(i);
  }
  std::vector<std::string> base_vars;
  std::vector<int> keep;
  for (int i = 0; i < ext.nvars(); ++i)
    if (std::find(pidx.begin(), pidx.end(), i) == pidx.end()) {
      base_vars.push_back(ext.var(i));
      keep.push_back(i);
    }
  ParametricSplit out;
  out.base_ring = Ring(base_vars);
  out.constant_part = QPoly(out.base_ring);
  out.param_polys.assign(params.size(), QPoly(out.base_ring));
  for (const auto& [m, c] : f.terms()) {
    int which = -1;
    for (size_t k = 0; k < pidx.size(); ++k) {
      int e = m.exponent(pidx[k]);
      if (e == 0) continue;
      if (e > 1 || which >= 0)
        throw std::invalid_argument("polynomial is not affine in the parameters");
      which = static_cast<int>(k);
    }
    std::vector<int> be;
    be.reserve(keep.size());
    for (int i : keep) be.push_back(m.exponent(i));
    Monomial bm(be);
    if (which < 0)
      out.constant_part.add_term(bm, c);
    else
      out.param_polys[which].add_term(bm, c);
  }
  return out;
}

}  // namespace detail

/// Is f a sum of squares? Optionally in a quotient ring (degree bound 2d
/// required there) and with free parameters f must be affine in.
inline SDPResult solve_sos(const QPoly& f, const SolveOptions& opts = {},
                           const std::optional<GroebnerBasis>& ideal = {},
                           std::optional<int> two_d = {},
                           const std::vector<std::string>& params = {},
                           const std::vector<Rational>& param_objective = {}) {
  QPoly target = f;
  std::vector<std::string> param_names = params;
  std::vector<QPoly> param_polys;
  Ring ring = f.ring();
  if (!params.empty()) {
    auto split = detail::split_parametric(f, params);
    ring = split.base_ring;
    target = split.constant_part;
    param_polys = split.param_polys;
    if (ideal) throw std::invalid_argument("parametric solve over a quotient is not supported");
  }
  if (ideal && !two_d)
    throw std::invalid_argument("a degree bound 2d must be given in a quotient ring");
  std::vector<Monomial> support = detail::support_of(target);
  for (const auto& fk : param_polys)
    for (const auto& m : detail::support_of(fk)) support.push_back(m);
  int deg = target.degree();
  for (const auto& fk : param_polys) deg = std::max(deg, fk.degree());
  int bound = two_d ? *two_d : deg + (deg % 2);
  std::vector<Monomial> basis = monomial_basis_from_support(ring, support, bound, ideal);
  if (basis.empty()) {
    SDPResult r;
    r.ring = ring;
    r.status = f.is_zero() ? SolveStatus::Feasible : SolveStatus::Infeasible;
    r.rounded = f.is_zero();
    if (f.is_zero()) r.gram_exact = RationalGram{QMatrix(0, 0), {}, {}, 0};
    r.message = "empty monomial basis";
    return r;
  }
  GramObjective obj;
  if (!param_objective.empty()) {
    obj.kind = GramObjective::Kind::Linear;
    obj.param_coeffs = param_objective;
  } else if (opts.trace_obj) {
    obj.kind = GramObjective::Kind::Trace;
  }
  try {
    auto [prob, inst] =
        build_gram_problem(ring, target, basis, ideal, param_names, param_polys, {}, obj, false);
    return detail::run_gram_pipeline(std::move(prob), inst, opts, false);
  } catch (const FormulationError& e) {
    return detail::infeasible_result(ring, e.what());
  }
}

/// Finds multipliers l_i with sum_i l_i h_i a nonzero SOS of degree <= 2d.
/// Returns the certificate result and the rounded multipliers.
inline std::pair<SDPResult, std::vector<QPoly>> sos_in_ideal(const std::vector<QPoly>& gens,
                                                             int two_d,
                                                             const SolveOptions& opts = {}) {
  if (gens.empty()) throw std::invalid_argument("sos_in_ideal: empty generator list");
  if (two_d < 2 || two_d % 2 != 0)
    throw std::invalid_argument("sos_in_ideal: 2d must be an even integer >= 2");
  Ring ring = gens.front().ring();
  bool homogeneous = true;
  for (const auto& h : gens) {
    if (h.ring() != ring) throw std::invalid_argument("sos_in_ideal: mixed rings");
    for (const auto& [m, c] : h.terms()) homogeneous = homogeneous && m.degree() == h.degree();
  }
  std::vector<MultiplierSlot> slots;
  std::vector<Monomial> support;
  for (const auto& h : gens) {
    int delta = two_d - h.degree();
    if (delta < 0) continue;  // generator too heavy for this degree bound
    MultiplierSlot slot;
    slot.generator = h;
    slot.monomials = monomials_up_to_degree(ring.nvars(), delta, homogeneous ? delta : 0);
    for (const auto& mm : slot.monomials)
      for (const auto& [m, c] : h.terms()) support.push_back(mm * m);
    slots.push_back(std::move(slot));
  }
  if (slots.empty()) throw FormulationError("all generators exceed the degree bound 2d");
  std::vector<Monomial> basis = monomial_basis_from_support(ring, support, two_d, {});
  auto [prob, inst] = build_gram_problem(ring, QPoly(ring), basis, {}, {}, {}, slots,
                                         GramObjective{}, /*trace_one=*/true);
  SDPResult res = detail::run_gram_pipeline(std::move(prob), inst, opts, /*require_nonzero=*/true);
  std::vector<QPoly> mult = res.multipliers;
  return {std::move(res), std::move(mult)};
}

/// Quotient form: certifies 0 as a nonzero SOS in R/I up to degree 2d.
inline SDPResult sos_in_ideal(const GroebnerBasis& gb, int two_d, const SolveOptions& opts = {}) {
  if (two_d < 2 || two_d % 2 != 0)
    throw std::invalid_argument("sos_in_ideal: 2d must be an even integer >= 2");
  std::vector<Monomial> basis = standard_monomials(gb, two_d / 2);
  if (basis.empty()) {
    SDPResult r;
    r.ring = gb.ring;
    r.status = SolveStatus::Infeasible;
    r.message = "no standard monomials at this degree";
    return r;
  }
  auto [prob, inst] = build_gram_problem(gb.ring, QPoly(gb.ring), basis, gb, {}, {}, {},
                                         GramObjective{}, /*trace_one=*/true);
  return detail::run_gram_pipeline(std::move(prob), inst, opts, /*require_nonzero=*/true);
}

/// Hilbert-style decomposition of a nonnegative ternary form as a quotient of
/// SOS forms: f * prod(dens) == prod(nums) exactly.
struct TernaryDecomposition {
  std::vector<SOSPoly> nums;
  std::vector<SOSPoly> dens;
};

inline TernaryDecomposition sosdec_ternary(const QPoly& f, SolveOptions opts = {}) {
  if (f.ring().nvars() != 3)
    throw std::invalid_argument("sosdec_ternary: exactly 3 variables required");
  if (f.is_zero()) throw std::invalid_argument("sosdec_ternary: zero polynomial");
  for (const auto& [m, c] : f.terms())
    if (m.degree() != f.degree())
      throw std::invalid_argument("sosdec_ternary: input must be a form (homogeneous)");
  if (f.degree() % 2 != 0) throw std::invalid_argument("sosdec_ternary: degree must be even");
  opts.round_tol = std::max(opts.round_tol, 12);  // boundary certificates need fine grids

  TernaryDecomposition out;
  std::vector<SOSPoly> stages;
  QPoly g = f;
  const int max_stages = 12;
  for (int stage = 0; stage < max_stages; ++stage) {
    SDPResult direct = solve_sos(g, opts);
    if (direct.certified()) {
      stages.push_back(sos_poly(direct));
      for (size_t i = 0; i < stages.size(); ++i)
        (i % 2 == 0 ? out.nums : out.dens).push_back(stages[i]);
      return out;
    }
    int delta = std::max(g.degree() - 4, 2);
    auto [res, mult] = sos_in_ideal({g}, g.degree() + delta, opts);
    if (!res.certified() || mult.empty() || mult.front().is_zero())
      throw std::runtime_error("sosdec_ternary: no SOS multiplier certificate at stage " +
                               std::to_string(stage));
    stages.push_back(sos_poly(res));  // decomposition of g * mult
    g = mult.front();
  }
  throw std::runtime_error("sosdec_ternary: stage limit exceeded");
}

/// Largest t with f - t a (quotient-ring / multiplier-relaxed) SOS.
struct LowerBoundResult {
  bool found = false;
  bool exact = false;
  Rational bound;       // valid when exact
  double bound_float = 0;
  SDPResult result;
  std::vector<QPoly> multipliers;
};

namespace detail {

inline LowerBoundResult lower_bound_impl(const QPoly& f, const std::optional<GroebnerBasis>& ideal,
                                         const std::vector<QPoly>& constraint_gens, int two_d,
                                         const SolveOptions& opts) {
  Ring ring = f.ring();
  std::vector<std::string> params = {"t"};
  std::vector<QPoly> param_polys = {QPoly::constant(ring, Rational(-1))};
  std::vector<MultiplierSlot> slots;
  std::vector<Monomial> support = support_of(f);
  support.push_back(Monomial::one(ring.nvars()));
  for (const auto& h : constraint_gens) {
    int delta = two_d - h.degree();
    if (delta < 0) continue;
    MultiplierSlot slot;
    slot.generator = h;
    slot.monomials = monomials_up_to_degree(ring.nvars(), delta);
    for (const auto& mm : slot.monomials)
      for (const auto& [m, c] : h.terms()) support.push_back(mm * m);
    slots.push_back(std::move(slot));
  }
  GramObjective obj;
  obj.kind = GramObjective::Kind::Linear;
  obj.param_coeffs = {Rational(-1)};  // minimize -t
  std::vector<Monomial> basis = monomial_basis_from_support(ring, support, two_d, ideal);
  LowerBoundResult out;
  if (basis.empty()) {
    out.result.status = SolveStatus::Infeasible;
    out.result.message = "empty monomial basis";
    return out;
  }
  try {
    auto [prob, inst] =
        build_gram_problem(ring, f, basis, ideal, params, param_polys, slots, obj, false);
    out.result = detail::run_gram_pipeline(std::move(prob), inst, opts, false);
  } catch (const FormulationError& e) {
    out.result = detail::infeasible_result(ring, e.what());
  }
  if (out.result.status != SolveStatus::Feasible) return out;
  out.found = true;
  out.bound_float = out.result.free_float.size() ? out.result.free_float(0) : 0.0;
  if (out.result.rounded) {
    out.exact = true;
    out.bound = out.result.params_exact.at(0);
    out.multipliers = out.result.multipliers;
  }
  return out;
}

}  // namespace detail

inline LowerBoundResult lower_bound(const QPoly& f, const SolveOptions& opts = {},
                                    std::optional<int> two_d = {}) {
  int bound = two_d ? *two_d : detail::default_two_d(f);
  return detail::lower_bound_impl(f, {}, {}, bound, opts);
}

inline LowerBoundResult lower_bound(const QPoly& f, const GroebnerBasis& gb, int two_d,
                                    const SolveOptions& opts = {}) {
  return detail::lower_bound_impl(f, gb, {}, two_d, opts);
}

inline LowerBoundResult lower_bound(const QPoly& f, const std::vector<QPoly>& constraints,
                                    int two_d, const SolveOptions& opts = {}) {
  return detail::lower_bound_impl(f, {}, constraints, two_d, opts);
}

/// Minimizer recovery from a rank-one moment matrix.
inline std::optional<std::map<std::string, double>> recover_solution(const SDPResult& res,
                                                                     double rank_tol = 1e-6) {
  if (res.moment.size() == 0) return std::nullopt;
  const Ring& ring = res.ring;
  auto find_index = [&](const Monomial& m) -> int {
    for (size_t i = 0; i < res.basis.size(); ++i)
      if (res.basis[i] == m) return static_cast<int>(i);
    return -1;
  };
  int i1 = find_index(Monomial::one(ring.nvars()));
  if (i1 < 0) return std::nullopt;
  std::vector<int> vidx;
  for (int v = 0; v < ring.nvars(); ++v) {
    int i = find_index(Monomial::var(v, ring.nvars()));
    if (i < 0) return std::nullopt;
    vidx.push_back(i);
  }
  double c = res.moment(i1, i1);
  if (!(c > 0)) return std::nullopt;
  Eigen::MatrixXd M = res.moment / c;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  Eigen::VectorXd ev = es.eigenvalues();
  double largest = ev(ev.size() - 1);
  double second = ev.size() > 1 ? std::max(std::abs(ev(ev.size() - 2)), 0.0) : 0.0;
  if (!(largest > 0) || second > rank_tol * largest) return std::nullopt;
  std::map<std::string, double> out;
  for (int v = 0; v < ring.nvars(); ++v) out[ring.var(v)] = M(i1, vidx[v]);
  return out;
}

}  // namespace sosq
