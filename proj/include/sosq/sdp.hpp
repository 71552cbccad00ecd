#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace sosq {

/// Symmetric block-diagonal matrix; one dense Eigen block per cone block.
struct SymmBlockMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  static SymmBlockMatrix zero(const std::vector<int>& sizes) {
    SymmBlockMatrix m;
    for (int s : sizes) m.blocks.push_back(Eigen::MatrixXd::Zero(s, s));
    return m;
  }
  static SymmBlockMatrix identity(const std::vector<int>& sizes, double tau = 1.0) {
    SymmBlockMatrix m;
    for (int s : sizes) m.blocks.push_back(tau * Eigen::MatrixXd::Identity(s, s));
    return m;
  }

  double dot(const SymmBlockMatrix& o) const {
    double t = 0;
    for (size_t k = 0; k < blocks.size(); ++k) t += blocks[k].cwiseProduct(o.blocks[k]).sum();
    return t;
  }
  double max_abs() const {
    double t = 0;
    for (const auto& b : blocks)
      if (b.size() > 0) t = std::max(t, b.cwiseAbs().maxCoeff());
    return t;
  }
  SymmBlockMatrix& axpy(double a, const SymmBlockMatrix& o) {
    for (size_t k = 0; k < blocks.size(); ++k) blocks[k] += a * o.blocks[k];
    return *this;
  }
  bool is_zero() const {
    for (const auto& b : blocks)
      if (b.size() > 0 && b.cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
  }
};

/// Primal problem: minimize C.X + c_free'u  over  X psd (block diagonal), u free,
/// subject to A_i.X + free_coeffs(i,:)u = rhs(i).
/// Dual: maximize rhs'y subject to Z = C - sum_i y_i A_i psd, free_coeffs'y = c_free.
struct SDPInstance {
  std::vector<int> block_sizes;
  std::vector<SymmBlockMatrix> constraints;
  Eigen::MatrixXd free_coeffs;   // m x p (p == 0 when no free variables)
  Eigen::VectorXd rhs;           // length m
  SymmBlockMatrix objective;     // C
  Eigen::VectorXd free_objective;  // length p

  int num_constraints() const { return static_cast<int>(rhs.size()); }
  int num_free() const { return static_cast<int>(free_objective.size()); }
  int total_dim() const {
    int t = 0;
    for (int s : block_sizes) t += s;
    return t;
  }

  void validate() const {
    for (int s : block_sizes)
      if (s <= 0) throw std::invalid_argument("SDPInstance: nonpositive block size");
    auto check = [&](const SymmBlockMatrix& m, const char* what) {
      if (m.blocks.size() != block_sizes.size())
        throw std::invalid_argument(std::string("SDPInstance: block count mismatch in ") + what);
      for (size_t k = 0; k < m.blocks.size(); ++k) {
        if (m.blocks[k].rows() != block_sizes[k] || m.blocks[k].cols() != block_sizes[k])
          throw std::invalid_argument(std::string("SDPInstance: block shape mismatch in ") + what);
        if ((m.blocks[k] - m.blocks[k].transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + m.max_abs()))
          throw std::invalid_argument(std::string("SDPInstance: non-symmetric block in ") + what);
      }
    };
    check(objective, "objective");
    if (static_cast<int>(constraints.size()) != num_constraints())
      throw std::invalid_argument("SDPInstance: constraint count mismatch");
    for (const auto& A : constraints) check(A, "constraint");
    if (num_free() > 0 &&
        (free_coeffs.rows() != num_constraints() || free_coeffs.cols() != num_free()))
      throw std::invalid_argument("SDPInstance: free coefficient shape mismatch");
  }
};

enum class SolveStatus { Feasible, Infeasible, Unknown };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "SDP solved, primal-dual feasible";
    case SolveStatus::Infeasible: return "infeasible";
    default: return "unknown";
  }
}

struct SDPSolution {
  SolveStatus status = SolveStatus::Unknown;
  SymmBlockMatrix X, Z;
  Eigen::VectorXd y;
  Eigen::VectorXd free_values;  // u
  double primal_obj = 0, dual_obj = 0;
  int iterations = 0;
  std::string message;
};

struct SolverOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iterations = 100;
  double infeasibility_threshold = 1e8;
  double step_fraction = 0.98;
};

struct KKTReport {
  double primal_residual = 0;   // max_i |A_i.X + G_i u - b_i|
  double dual_residual = 0;     // max entry of |C - Z - sum y A| and |c - G'y|
  double min_eig_X = 0, min_eig_Z = 0;
  double duality_gap = 0;       // |C.X + c'u - b'y|
};

inline KKTReport kkt_report(const SDPInstance& p, const SDPSolution& s) {
  KKTReport r;
  const int m = p.num_constraints(), pf = p.num_free();
  for (int i = 0; i < m; ++i) {
    double v = p.constraints[i].dot(s.X) - p.rhs(i);
    if (pf) v += p.free_coeffs.row(i).dot(s.free_values);
    r.primal_residual = std::max(r.primal_residual, std::abs(v));
  }
  SymmBlockMatrix Rd = p.objective;
  Rd.axpy(-1.0, s.Z);
  for (int i = 0; i < m; ++i) Rd.axpy(-s.y(i), p.constraints[i]);
  r.dual_residual = Rd.max_abs();
  if (pf) {
    Eigen::VectorXd rf = p.free_objective - p.free_coeffs.transpose() * s.y;
    r.dual_residual = std::max(r.dual_residual, rf.size() ? rf.cwiseAbs().maxCoeff() : 0.0);
  }
  double minx = 0, minz = 0;
  for (size_t k = 0; k < s.X.blocks.size(); ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(s.X.blocks[k]), ez(s.Z.blocks[k]);
    minx = std::min(minx, ex.eigenvalues().minCoeff());
    minz = std::min(minz, ez.eigenvalues().minCoeff());
  }
  r.min_eig_X = minx;
  r.min_eig_Z = minz;
  double pobj = p.objective.dot(s.X) + (pf ? p.free_objective.dot(s.free_values) : 0.0);
  double dobj = m ? p.rhs.dot(s.y) : 0.0;
  r.duality_gap = std::abs(pobj - dobj);
  return r;
}

namespace detail {

/// Largest alpha with S + alpha*dS psd, via the generalized eigenvalue bound.
inline double max_step(const SymmBlockMatrix& S, const SymmBlockMatrix& dS) {
  double amax = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < S.blocks.size(); ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(S.blocks[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd W = L.triangularView<Eigen::Lower>().solve(dS.blocks[k]);
    W = L.triangularView<Eigen::Lower>().solve(W.transpose()).eval();
    W = 0.5 * (W + W.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0) amax = std::min(amax, -1.0 / lmin);
  }
  return amax;
}

}  // namespace detail

/// Dense primal-dual path-following solver (HKM direction, Mehrotra
/// predictor-corrector). Deterministic for fixed inputs and options.
inline SDPSolution solve_builtin(const SDPInstance& prob, const SolverOptions& opts = {}) {
  prob.validate();
  const int m = prob.num_constraints();
  const int pf = prob.num_free();
  const int nb = static_cast<int>(prob.block_sizes.size());
  const int ntot = prob.total_dim();

  double scale = std::max(1.0, prob.objective.max_abs());
  for (const auto& A : prob.constraints) scale = std::max(scale, A.max_abs());
  if (m) scale = std::max(scale, prob.rhs.cwiseAbs().maxCoeff());
  const double tau = std::max(10.0, std::sqrt(double(ntot)) * scale);

  SDPSolution sol;
  sol.X = SymmBlockMatrix::identity(prob.block_sizes, tau);
  sol.Z = SymmBlockMatrix::identity(prob.block_sizes, tau);
  sol.y = Eigen::VectorXd::Zero(m);
  sol.free_values = Eigen::VectorXd::Zero(pf);

  auto finite = [](const SymmBlockMatrix& M) {
    for (const auto& b : M.blocks)
      if (!b.allFinite()) return false;
    return true;
  };

  const bool trace = std::getenv("SOSQ_SDP_TRACE") != nullptr;

  for (int it = 0; it <= opts.max_iterations; ++it) {
    sol.iterations = it;
    Eigen::VectorXd rp(m);
    for (int i = 0; i < m; ++i) {
      rp(i) = prob.rhs(i) - prob.constraints[i].dot(sol.X);
      if (pf) rp(i) -= prob.free_coeffs.row(i).dot(sol.free_values);
    }
    SymmBlockMatrix Rd = prob.objective;
    Rd.axpy(-1.0, sol.Z);
    for (int i = 0; i < m; ++i) Rd.axpy(-sol.y(i), prob.constraints[i]);
    Eigen::VectorXd rf =
        pf ? Eigen::VectorXd(prob.free_objective - prob.free_coeffs.transpose() * sol.y)
           : Eigen::VectorXd();

    const double gap = sol.X.dot(sol.Z);
    const double mu = gap / ntot;
    sol.primal_obj = prob.objective.dot(sol.X) + (pf ? prob.free_objective.dot(sol.free_values) : 0.0);
    sol.dual_obj = m ? prob.rhs.dot(sol.y) : 0.0;

    const double prires = m ? rp.cwiseAbs().maxCoeff() : 0.0;
    const double dures = std::max(Rd.max_abs(), pf ? rf.cwiseAbs().maxCoeff() : 0.0);
    if (trace)
      std::fprintf(stderr, "sdp it %3d: rp %.2e rd %.2e mu %.2e pobj %.10g dobj %.10g\n", it,
                   prires, dures, mu, sol.primal_obj, sol.dual_obj);
    if (prires <= opts.feas_tol && dures <= opts.feas_tol &&
        std::abs(sol.primal_obj - sol.dual_obj) <= opts.gap_tol * (1 + std::abs(sol.primal_obj))) {
      sol.status = SolveStatus::Feasible;
      return sol;
    }
    if (sol.dual_obj > opts.infeasibility_threshold) {
      sol.status = SolveStatus::Infeasible;
      sol.message = "dual objective diverged; primal infeasible";
      return sol;
    }
    if (!std::isfinite(sol.primal_obj) || !std::isfinite(sol.dual_obj) || !finite(sol.X) ||
        !finite(sol.Z)) {
      sol.status = SolveStatus::Unknown;
      sol.message = "numerical failure";
      return sol;
    }
    if (it == opts.max_iterations) break;

    std::vector<Eigen::MatrixXd> Zi(nb);
    bool zok = true;
    for (int k = 0; k < nb; ++k) {
      Eigen::LLT<Eigen::MatrixXd> llt(sol.Z.blocks[k]);
      if (llt.info() != Eigen::Success) {
        zok = false;
        break;
      }
      Zi[k] = llt.solve(Eigen::MatrixXd::Identity(prob.block_sizes[k], prob.block_sizes[k]));
    }
    if (!zok) {
      sol.status = SolveStatus::Unknown;
      sol.message = "dual iterate lost positive definiteness";
      return sol;
    }

    // Schur complement M_ij = A_i . (X A_j Z^-1).
    std::vector<SymmBlockMatrix> T(m);
    for (int j = 0; j < m; ++j) {
      T[j].blocks.resize(nb);
      for (int k = 0; k < nb; ++k)
        T[j].blocks[k] = sol.X.blocks[k] * prob.constraints[j].blocks[k] * Zi[k];
    }
    Eigen::MatrixXd M(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) M(i, j) = prob.constraints[i].dot(T[j]);
    M = 0.5 * (M + M.transpose()).eval();
    Eigen::PartialPivLU<Eigen::MatrixXd> mlu(M);
    auto msolve = [&](const Eigen::MatrixXd& R) -> Eigen::MatrixXd {
      if (m == 0) return Eigen::MatrixXd::Zero(0, R.cols());
      Eigen::MatrixXd s = mlu.solve(R);
      for (int pass = 0; pass < 2; ++pass) {
        if (!s.allFinite()) break;
        Eigen::MatrixXd resid = R - M * s;
        if (resid.cwiseAbs().maxCoeff() <= 1e-13 * (1 + R.cwiseAbs().maxCoeff())) break;
        s += mlu.solve(resid);
      }
      if (!s.allFinite()) {
        double jitter = 1e-12 * (1 + M.cwiseAbs().maxCoeff());
        Eigen::PartialPivLU<Eigen::MatrixXd> reg(M + jitter * Eigen::MatrixXd::Identity(m, m));
        s = reg.solve(R);
      }
      return s;
    };

    std::vector<Eigen::MatrixXd> XRdZi(nb);
    for (int k = 0; k < nb; ++k) XRdZi[k] = sol.X.blocks[k] * Rd.blocks[k] * Zi[k];

    Eigen::MatrixXd MiG;
    Eigen::LDLT<Eigen::MatrixXd> sldlt;
    if (pf) {
      MiG = msolve(prob.free_coeffs);
      Eigen::MatrixXd S = prob.free_coeffs.transpose() * MiG;
      S = 0.5 * (S + S.transpose()).eval();
      sldlt.compute(S);
    }

    auto direction = [&](double mu_target, const std::vector<Eigen::MatrixXd>* corr,
                         SymmBlockMatrix& dX, Eigen::VectorXd& du, Eigen::VectorXd& dy,
                         SymmBlockMatrix& dZ) {
      std::vector<Eigen::MatrixXd> RcZi(nb);
      for (int k = 0; k < nb; ++k) {
        RcZi[k] = mu_target * Zi[k] - sol.X.blocks[k];
        if (corr) RcZi[k] -= (*corr)[k] * Zi[k];
      }
      Eigen::VectorXd g(m);
      for (int i = 0; i < m; ++i) {
        double acc = rp(i);
        for (int k = 0; k < nb; ++k)
          acc += prob.constraints[i].blocks[k].cwiseProduct(XRdZi[k] - RcZi[k]).sum();
        g(i) = acc;
      }
      if (pf) {
        Eigen::VectorXd mig = msolve(g);
        du = sldlt.solve(prob.free_coeffs.transpose() * mig - rf);
        dy = mig - MiG * du;
      } else {
        du.resize(0);
        dy = msolve(g);
      }
      dZ = Rd;
      for (int i = 0; i < m; ++i) dZ.axpy(-dy(i), prob.constraints[i]);
      dX.blocks.resize(nb);
      for (int k = 0; k < nb; ++k) {
        Eigen::MatrixXd v = RcZi[k] - sol.X.blocks[k] * dZ.blocks[k] * Zi[k];
        dX.blocks[k] = 0.5 * (v + v.transpose());
      }
      // Refine the equality parts of the direction; the Schur solve loses
      // accuracy when complementarity drives M ill-conditioned.
      for (int pass = 0; pass < 2 && m; ++pass) {
        Eigen::VectorXd res1(m);
        for (int i = 0; i < m; ++i) {
          double acc = rp(i) - prob.constraints[i].dot(dX);
          if (pf) acc -= prob.free_coeffs.row(i).dot(du);
          res1(i) = acc;
        }
        Eigen::VectorXd res2 =
            pf ? Eigen::VectorXd(rf - prob.free_coeffs.transpose() * dy) : Eigen::VectorXd();
        double err = res1.cwiseAbs().maxCoeff();
        if (pf && res2.size()) err = std::max(err, res2.cwiseAbs().maxCoeff());
        if (err <= 1e-11 * (1 + rp.cwiseAbs().maxCoeff())) break;
        Eigen::VectorXd ddy, ddu;
        if (pf) {
          Eigen::VectorXd mig = msolve(res1);
          ddu = sldlt.solve(prob.free_coeffs.transpose() * mig - res2);
          ddy = mig - MiG * ddu;
        } else {
          ddu.resize(0);
          ddy = msolve(res1);
        }
        dy += ddy;
        if (pf) du += ddu;
        SymmBlockMatrix dA = SymmBlockMatrix::zero(prob.block_sizes);
        for (int i = 0; i < m; ++i) dA.axpy(ddy(i), prob.constraints[i]);
        dZ.axpy(-1.0, dA);
        for (int k = 0; k < nb; ++k) {
          Eigen::MatrixXd v = sol.X.blocks[k] * dA.blocks[k] * Zi[k];
          dX.blocks[k] += 0.5 * (v + v.transpose());
        }
      }
    };

    SymmBlockMatrix dXa, dZa;
    Eigen::VectorXd dua, dya;
    direction(0.0, nullptr, dXa, dua, dya, dZa);
    double apa = std::min(1.0, detail::max_step(sol.X, dXa));
    double ada = std::min(1.0, detail::max_step(sol.Z, dZa));
    SymmBlockMatrix Xa = sol.X, Za = sol.Z;
    Xa.axpy(apa, dXa);
    Za.axpy(ada, dZa);
    double gap_aff = Xa.dot(Za);
    double sigma = gap > 0 ? std::pow(std::max(gap_aff, 0.0) / gap, 3.0) : 0.0;
    sigma = std::min(1.0, std::max(sigma, 1e-10));

    std::vector<Eigen::MatrixXd> corr(nb);
    for (int k = 0; k < nb; ++k) corr[k] = dXa.blocks[k] * dZa.blocks[k];
    SymmBlockMatrix dX, dZ;
    Eigen::VectorXd du, dy;
    direction(sigma * mu, &corr, dX, du, dy, dZ);

    double ap = std::min(1.0, opts.step_fraction * detail::max_step(sol.X, dX));
    double ad = std::min(1.0, opts.step_fraction * detail::max_step(sol.Z, dZ));
    sol.X.axpy(ap, dX);
    if (pf) sol.free_values += ap * du;
    sol.y += ad * dy;
    sol.Z.axpy(ad, dZ);
  }
  sol.status = SolveStatus::Unknown;
  sol.message = "iteration limit exceeded";
  return sol;
}

}  // namespace sosq
