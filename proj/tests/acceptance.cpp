// Acceptance suite: one line per criterion, exit nonzero if any fails.

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "sosq/sosq.hpp"

using namespace sosq;

namespace {

int g_failures = 0;
std::ostringstream g_notes;

void report(int criterion, const std::string& name, bool ok, const std::string& note = "") {
  std::cout << "criterion " << criterion << " (" << name << "): " << (ok ? "PASS" : "FAIL");
  if (!note.empty()) std::cout << " [" << note << "]";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

Ring xy() { return Ring({"x", "y"}); }
Ring xyz() { return Ring({"x", "y", "z"}); }
QPoly q(const std::string& s, const Ring& r) { return parse_polynomial(s, r); }

// ---------------------------------------------------------------- criterion 1
void criterion1() {
  bool ok = true;
  auto f = q("2*x^4+5*y^4-2*x^2*y^2+2*x^3*y", xy());
  SDPResult res = solve_sos(f);
  ok = ok && res.certified();
  if (ok) {
    SOSPoly s = sos_poly(res);
    ok = ok && (expand_sos(s) == f);  // exact, zero tolerance
  }
  // LDLT regression on the printed Gram matrix
  QMatrix Q(3, 3);
  Q(0, 0) = 2;
  Q(0, 1) = Q(1, 0) = 1;
  Q(0, 2) = Q(2, 0) = Rational(-83, 40);
  Q(1, 1) = Rational(43, 20);
  Q(2, 2) = 5;
  LDLTResult ldlt = exact_ldlt(Q);
  ok = ok && ldlt.psd && ldlt.D.size() == 3;
  ok = ok && ldlt.D[0] == 5 && ldlt.D[1] == Rational(43, 20) &&
       ldlt.D[2] == Rational(231773, 344000);
  report(1, "quartic decomposition + printed-Gram LDLT", ok);
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
  bool ok = true;
  auto gb = buchberger({q("x^2+y^2-1", xy())});
  auto f = q("10-x^2-y", xy());
  SolveOptions opts;
  opts.trace_obj = true;
  SDPResult res = solve_sos(f, opts, gb, 2);
  ok = ok && res.certified();
  if (ok) {
    SOSPoly s = sos_poly(res);
    ok = ok && s.size() <= 3;
    ok = ok && verify_certificate(s, f, gb);  // defect in the ideal, exactly
  }
  // the specific paper certificate passes verification (hard-coded regression)
  SOSPoly paper({Rational(9), Rational(35, 36)}, {q("-1/18*y+1", xy()), q("y", xy())});
  ok = ok && verify_certificate(paper, f, gb);
  report(2, "circle quotient certificate", ok);
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
  bool ok = true;
  Ring r = xyz();
  std::vector<QPoly> h = {q("x^2-4*x+2*y^2", r), q("2*z^2-y^2+2", r)};
  auto rr = buchberger({q("x-2", r), q("z", r), q("y^2-2", r)});  // real radical

  auto [gen_res, mult] = sos_in_ideal(h, 2);
  ok = ok && gen_res.certified() && mult.size() == 2;
  if (ok) {
    SOSPoly s = sos_poly(gen_res);
    std::vector<std::pair<QPoly, QPoly>> terms;
    for (size_t i = 0; i < h.size(); ++i) terms.emplace_back(mult[i], h[i]);
    ok = ok && verify_certificate(s, QPoly(r), {}, terms);
    ok = ok && !expand_sos(s, r).is_zero();
    for (const auto& g : s.generators) ok = ok && normal_form(g, rr).is_zero();
  }

  auto gb = buchberger(h);
  SDPResult quo_res = sos_in_ideal(gb, 2);
  ok = ok && quo_res.certified();
  if (ok) {
    SOSPoly s = sos_poly(quo_res);
    ok = ok && verify_certificate(s, QPoly(r), gb);
    ok = ok && !expand_sos(s, r).is_zero();
    for (const auto& g : s.generators) ok = ok && normal_form(g, rr).is_zero();
  }
  report(3, "sos_in_ideal both forms + real radical membership", ok);
}

// ---------------------------------------------------------------- criterion 4
void criterion4() {
  bool ok = true;
  QPoly m = named_form("Motzkin", xyz());
  SDPResult not_sos = solve_sos(m);
  ok = ok && not_sos.status != SolveStatus::Feasible;

  SolveOptions opts;
  opts.round_tol = 12;
  QPoly prod = q("x^2+y^2+z^2", xyz()) * m;
  SDPResult is_sos = solve_sos(prod, opts);
  ok = ok && is_sos.certified();
  if (is_sos.certified()) ok = ok && verify_certificate(sos_poly(is_sos), prod);

  bool dec_ok = true;
  try {
    TernaryDecomposition dec = sosdec_ternary(m);
    QPoly lhs = m;
    for (const auto& d : dec.dens) lhs *= expand_sos(d, xyz());
    QPoly rhs = QPoly::constant(xyz(), Rational(1));
    for (const auto& n : dec.nums) rhs *= expand_sos(n, xyz());
    dec_ok = dec_ok && (lhs == rhs);
    dec_ok = dec_ok && dec.dens.size() == 1;
    for (const auto& g : dec.dens.at(0).generators)
      dec_ok = dec_ok && g.num_terms() == 1 && g.leading_monomial().degree() == 1;
  } catch (const std::exception& e) {
    dec_ok = false;
  }
  ok = ok && dec_ok;
  report(4, "Motzkin: not SOS, product SOS, ternary decomposition", ok);
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
  Ring xz({"x", "z"});
  QPoly f = named_form("Motzkin", {QPoly::variable(xz, 0), QPoly::constant(xz, 1),
                                   QPoly::variable(xz, 1)});
  SolveOptions opts;
  opts.round_tol = 12;
  LowerBoundResult lb = lower_bound(f, opts);
  bool ok = lb.found && lb.exact && lb.bound == Rational(-729, 4096);
  if (ok) {
    SOSPoly s = sos_poly(lb.result);
    ok = ok && verify_certificate(s, f - QPoly::constant(xz, lb.bound));
  }
  report(5, "Motzkin lower bound -729/4096 exactly", ok,
         lb.exact ? rational_to_string(lb.bound) : "no exact bound");
}

// ---------------------------------------------------------------- criterion 6
void criterion6() {
  bool ok = true;
  Ring ext({"x", "y", "z", "s", "t"});
  QPoly g = named_form("Robinson", {QPoly::variable(ext, 0), QPoly::variable(ext, 1),
                                    QPoly::variable(ext, 2)}) +
            QPoly::variable(ext, 3) * q("x^6", ext) + QPoly::variable(ext, 4) * q("y^6", ext);
  SolveOptions opts;
  opts.round_tol = 8;
  SDPResult res = solve_sos(g, opts, {}, {}, {"s", "t"});
  ok = ok && res.certified() && res.params_exact.size() == 2;
  std::string note;
  if (ok) {
    Ring r = xyz();
    QPoly target = named_form("Robinson", r) + res.params_exact[0] * q("x^6", r) +
                   res.params_exact[1] * q("y^6", r);
    ok = ok && verify_certificate(sos_poly(res), target);
    note = "s=" + rational_to_string(res.params_exact[0]) +
           ", t=" + rational_to_string(res.params_exact[1]);
  }
  Ring r = xyz();
  QPoly fixed = named_form("Robinson", r) + Rational(34) * q("x^6", r) +
                Rational(34) * q("y^6", r);
  SolveOptions opts2;
  opts2.round_tol = 10;
  SDPResult res2 = solve_sos(fixed, opts2);
  ok = ok && res2.certified();
  if (res2.certified()) ok = ok && verify_certificate(sos_poly(res2), fixed);
  report(6, "parametric Robinson + fixed (34,34) certificate", ok, note);
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
  bool ok = true;
  Ring r = xy();
  QPoly f = q("x-y", r);
  auto gb = buchberger({q("x^2-x", r), q("y^2-y", r)});
  LowerBoundResult lbq = lower_bound(f, gb, 2);
  ok = ok && lbq.exact && lbq.bound == Rational(-1);
  if (ok) ok = ok && verify_certificate(sos_poly(lbq.result), f - QPoly::constant(r, lbq.bound), gb);

  std::vector<QPoly> h = {q("x^2-x", r), q("y^2-y", r)};
  LowerBoundResult lbm = lower_bound(f, h, 2);
  ok = ok && lbm.exact && lbm.bound == Rational(-1);
  if (ok && lbm.exact) {
    std::vector<std::pair<QPoly, QPoly>> terms;
    for (size_t i = 0; i < h.size(); ++i) terms.emplace_back(lbm.multipliers[i], h[i]);
    ok = ok && verify_certificate(sos_poly(lbm.result), f - QPoly::constant(r, lbm.bound), {},
                                  terms);
  }
  auto sol = recover_solution(lbq.result);
  ok = ok && sol.has_value();
  if (sol) ok = ok && std::abs((*sol)["x"]) < 1e-5 && std::abs((*sol)["y"] - 1.0) < 1e-5;
  report(7, "hypercube bound -1 in both forms + recovery", ok);
}

// ---------------------------------------------------------------- criterion 8
void criterion8() {
  std::mt19937 rng(20240809);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 8), cnt(1, 3);
  bool ok = true;
  std::string note;

  // (a) 200 random certificates re-certify exactly
  {
    SolveOptions opts;
    opts.round_tol = 10;
    int done = 0, tries = 0;
    while (done < 200 && tries < 400) {
      ++tries;
      std::vector<Rational> w;
      std::vector<QPoly> gens;
      int k = cnt(rng);
      for (int i = 0; i < k; ++i) {
        w.push_back(Rational(std::abs(num(rng)) + 1, den(rng)));
        QPoly g(xy());
        for (const auto& m : monomials_up_to_degree(2, 2)) {
          if (rng() % 3 == 0) continue;
          g.add_term(m, Rational(num(rng), den(rng)));
        }
        if (g.is_zero()) g = q("x", xy());
        gens.push_back(g);
      }
      SOSPoly s(w, gens);
      QPoly f = expand_sos(s, xy());
      if (f.is_zero()) continue;
      ++done;
      SDPResult res = solve_sos(f, opts);
      bool this_ok = res.status == SolveStatus::Feasible && res.rounded &&
                     verify_certificate(sos_poly(res), f);
      if (!this_ok) {
        ok = false;
        note = "pipeline failure at corpus item " + std::to_string(done);
        break;
      }
    }
    ok = ok && done >= 200;
  }

  // (b) exact LDLT reconstruction on 100 random rational PSD matrices
  if (ok) {
    for (int t = 0; t < 100 && ok; ++t) {
      int n = 2 + t % 5;
      QMatrix M(n + 1, n);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = Rational(num(rng), den(rng));
      QMatrix Q = M.transpose() * M;
      LDLTResult f = exact_ldlt(Q);
      ok = ok && f.psd;
      if (!ok) {
        note = "LDLT rejected a PSD matrix";
        break;
      }
      QMatrix R(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Rational acc(0);
          for (int k = 0; k < n; ++k) acc += f.L(i, k) * f.D[k] * f.L(j, k);
          R(f.perm[i], f.perm[j]) = acc;
        }
      ok = ok && (R == Q);
      if (!ok) note = "LDLT reconstruction mismatch";
    }
  }

  // (c) built-in solver KKT residuals on its feasible outputs
  if (ok) {
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 10 && ok; ++t) {
      int n = 3 + t % 3, m = 2 + t % 4;
      SDPInstance p;
      p.block_sizes = {n};
      Eigen::MatrixXd X0(n, n), Z0(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          X0(i, j) = gauss(rng);
          Z0(i, j) = gauss(rng);
        }
      X0 = (X0 * X0.transpose() + Eigen::MatrixXd::Identity(n, n)).eval();
      Z0 = (Z0 * Z0.transpose() + Eigen::MatrixXd::Identity(n, n)).eval();
      p.rhs = Eigen::VectorXd(m);
      SymmBlockMatrix C;
      C.blocks = {Z0};
      for (int i = 0; i < m; ++i) {
        Eigen::MatrixXd A(n, n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) A(a, b) = gauss(rng);
        A = (0.5 * (A + A.transpose())).eval();
        SymmBlockMatrix Ab;
        Ab.blocks = {A};
        p.rhs(i) = A.cwiseProduct(X0).sum();
        C.blocks[0] += gauss(rng) * A;
        p.constraints.push_back(std::move(Ab));
      }
      p.objective = C;
      p.free_coeffs = Eigen::MatrixXd::Zero(m, 0);
      p.free_objective = Eigen::VectorXd::Zero(0);
      SDPSolution s = solve_builtin(p);
      if (s.status != SolveStatus::Feasible) continue;
      KKTReport kkt = kkt_report(p, s);
      ok = ok && kkt.primal_residual <= 1e-8 && kkt.min_eig_X >= -1e-8 && kkt.min_eig_Z >= -1e-8 &&
           kkt.duality_gap <= 1e-8 * (1 + std::abs(s.primal_obj));
      if (!ok) note = "KKT residual above 1e-8";
    }
  }

  // (d) Buchberger criterion on 50 random small ideals
  if (ok) {
    std::uniform_int_distribution<int> coef(-3, 3);
    int checked = 0;
    for (int t = 0; t < 80 && checked < 50 && ok; ++t) {
      Ring r = (t % 2 == 0) ? xy() : xyz();
      std::vector<QPoly> gens;
      for (int g = 0; g < 2; ++g) {
        QPoly p(r);
        for (const auto& m : monomials_up_to_degree(r.nvars(), 2)) {
          if (rng() % 2 == 0) continue;
          p.add_term(m, Rational(coef(rng)));
        }
        if (!p.is_zero()) gens.push_back(p);
      }
      if (gens.empty()) continue;
      ++checked;
      GroebnerBasis gb = buchberger(gens);
      for (size_t i = 0; i < gb.generators.size() && ok; ++i)
        for (size_t j = i + 1; j < gb.generators.size() && ok; ++j) {
          QPoly s = detail::s_polynomial(gb.generators[i], gb.generators[j]);
          ok = ok && normal_form(s, gb).is_zero();
        }
      for (const auto& g : gens) ok = ok && normal_form(g, gb).is_zero();
      if (!ok) note = "Buchberger criterion failed";
    }
    ok = ok && checked == 50;
  }

  // (e) SDPA write -> parse round trip identity
  if (ok) {
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int t = 0; t < 20 && ok; ++t) {
      SDPInstance p;
      p.block_sizes = {1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 2)};
      int m = 1 + rng() % 4;
      p.rhs = Eigen::VectorXd(m);
      p.free_coeffs = Eigen::MatrixXd::Zero(m, 0);
      p.free_objective = Eigen::VectorXd::Zero(0);
      p.objective = SymmBlockMatrix::zero(p.block_sizes);
      for (size_t b = 0; b < p.block_sizes.size(); ++b)
        for (int i = 0; i < p.block_sizes[b]; ++i)
          for (int j = i; j < p.block_sizes[b]; ++j)
            p.objective.blocks[b](i, j) = p.objective.blocks[b](j, i) = val(rng);
      for (int i = 0; i < m; ++i) {
        SymmBlockMatrix A = SymmBlockMatrix::zero(p.block_sizes);
        for (size_t b = 0; b < p.block_sizes.size(); ++b)
          for (int a = 0; a < p.block_sizes[b]; ++a)
            for (int c = a; c < p.block_sizes[b]; ++c)
              A.blocks[b](a, c) = A.blocks[b](c, a) = val(rng);
        p.constraints.push_back(std::move(A));
        p.rhs(i) = val(rng);
      }
      SDPInstance back = parse_sdpa_sparse(write_sdpa_sparse(p));
      ok = ok && back.block_sizes == p.block_sizes && back.num_constraints() == m;
      for (size_t b = 0; b < p.block_sizes.size() && ok; ++b)
        ok = ok &&
             (back.objective.blocks[b] - p.objective.blocks[b]).cwiseAbs().maxCoeff() == 0.0;
      for (int i = 0; i < m && ok; ++i) {
        ok = ok && back.rhs(i) == p.rhs(i);
        for (size_t b = 0; b < p.block_sizes.size() && ok; ++b)
          ok = ok &&
               (back.constraints[i].blocks[b] - p.constraints[i].blocks[b]).cwiseAbs().maxCoeff() ==
                   0.0;
      }
      if (!ok) note = "SDPA round trip mismatch";
    }
  }
  report(8, "property suites (a)-(e)", ok, note);
}

// ---------------------------------------------------------------- criterion 9
void criterion9() {
  SolveOptions probe;
  std::string path = probe.resolved_solver_path();
  bool have = false;
  if (path.find('/') != std::string::npos) {
    have = ::access(path.c_str(), X_OK) == 0;
  } else {
    std::string cmd = "command -v " + path + " > /dev/null 2>&1";
    have = std::system(cmd.c_str()) == 0;
    if (have) {
      char buf[512];
      FILE* p = popen(("command -v " + path).c_str(), "r");
      if (p && fgets(buf, sizeof(buf), p)) {
        path = buf;
        while (!path.empty() && (path.back() == '\n' || path.back() == ' ')) path.pop_back();
      }
      if (p) pclose(p);
    }
  }
  if (!have) {
    std::cout << "criterion 9 (cross-solver agreement): SKIP [no external solver on this host]"
              << std::endl;
    return;
  }
  bool ok = true;
  std::string note;
  SolveOptions ext;
  ext.solver = SolverChoice::External;
  ext.solver_path = path;
  // feasibility status agreement on the core examples, objectives within 1e-5
  {
    auto f = q("2*x^4+5*y^4-2*x^2*y^2+2*x^3*y", xy());
    SDPResult a = solve_sos(f);
    SDPResult b = solve_sos(f, ext);
    ok = ok && a.status == b.status;
  }
  {
    QPoly m = named_form("Motzkin", xyz());
    SDPResult a = solve_sos(m);
    SDPResult b = solve_sos(m, ext);
    ok = ok && (a.status == SolveStatus::Feasible) == (b.status == SolveStatus::Feasible);
  }
  {
    Ring xz({"x", "z"});
    QPoly f = q("x^4+x^2-3*x^2*z^2+z^6", xz);
    SolveOptions o1;
    o1.round_tol = 12;
    SolveOptions o2 = ext;
    o2.round_tol = 12;
    LowerBoundResult a = lower_bound(f, o1);
    LowerBoundResult b = lower_bound(f, o2);
    ok = ok && a.found == b.found;
    if (a.found && b.found)
      ok = ok && std::abs(a.bound_float - b.bound_float) <= 1e-5 * (1 + std::abs(a.bound_float));
  }
  report(9, "cross-solver agreement (" + path + ")", ok, note);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures) {
    std::cout << g_failures << " criterion(s) FAILED" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
