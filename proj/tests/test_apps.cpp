#include <catch_amalgamated.hpp>
#include <random>

#include "sosq/applications.hpp"
#include "sosq/forms.hpp"
#include "sosq/parse.hpp"

using namespace sosq;

namespace {

Ring xy() { return Ring({"x", "y"}); }
Ring xyz() { return Ring({"x", "y", "z"}); }
QPoly q(const std::string& s, const Ring& r) { return parse_polynomial(s, r); }

}  // namespace

TEST_CASE("solve_sos certifies the paper quartic with three squares") {
  auto f = q("2*x^4+5*y^4-2*x^2*y^2+2*x^3*y", xy());
  SDPResult res = solve_sos(f);
  REQUIRE(res.certified());
  SOSPoly s = sos_poly(res);
  CHECK(s.size() == 3);
  CHECK(expand_sos(s) == f);
  CHECK(verify_certificate(s, f));
}

TEST_CASE("Motzkin is not a sum of squares") {
  QPoly m = named_form("Motzkin", xyz());
  SDPResult res = solve_sos(m);
  CHECK(res.status != SolveStatus::Feasible);
}

TEST_CASE("Motzkin times (x^2+y^2+z^2) is SOS with an exact certificate") {
  QPoly m = named_form("Motzkin", xyz());
  QPoly f = q("x^2+y^2+z^2", xyz()) * m;
  SolveOptions opts;
  opts.round_tol = 12;
  SDPResult res = solve_sos(f, opts);
  REQUIRE(res.status == SolveStatus::Feasible);
  REQUIRE(res.rounded);
  SOSPoly s = sos_poly(res);
  CHECK(verify_certificate(s, f));
}

TEST_CASE("circle quotient certificate with trace objective") {
  auto gb = buchberger({q("x^2+y^2-1", xy())});
  auto f = q("10-x^2-y", xy());
  SolveOptions opts;
  opts.trace_obj = true;
  SDPResult res = solve_sos(f, opts, gb, 2);
  REQUIRE(res.certified());
  SOSPoly s = sos_poly(res);
  CHECK(s.size() <= 3);
  CHECK(verify_certificate(s, f, gb));
  // defect lies in the ideal but the certificate is not equal to f itself
  CHECK(expand_sos(s) != f);
}

TEST_CASE("solve_sos without degree bound in a quotient is an error") {
  auto gb = buchberger({q("x^2+y^2-1", xy())});
  CHECK_THROWS_AS(solve_sos(q("10-x^2-y", xy()), {}, gb), std::invalid_argument);
}

TEST_CASE("sos_in_ideal generator form finds multipliers") {
  Ring r = xyz();
  std::vector<QPoly> h = {q("x^2-4*x+2*y^2", r), q("2*z^2-y^2+2", r)};
  auto [res, mult] = sos_in_ideal(h, 2);
  REQUIRE(res.certified());
  REQUIRE(mult.size() == 2);
  SOSPoly s = sos_poly(res);
  CHECK_FALSE(expand_sos(s, r).is_zero());
  // exact identity: sum l_i h_i == expand(s)
  std::vector<std::pair<QPoly, QPoly>> terms;
  for (size_t i = 0; i < h.size(); ++i) terms.emplace_back(mult[i], h[i]);
  CHECK(verify_certificate(s, QPoly(r), {}, terms));
  // generators vanish on the real variety: x-2, z in the real radical
  auto rr = buchberger({q("x-2", r), q("z", r), q("y^2-2", r)});
  for (const auto& g : s.generators) CHECK(normal_form(g, rr).is_zero());
}

TEST_CASE("sos_in_ideal quotient form certifies zero nontrivially") {
  Ring r = xyz();
  auto gb = buchberger({q("x^2-4*x+2*y^2", r), q("2*z^2-y^2+2", r)});
  SDPResult res = sos_in_ideal(gb, 2);
  REQUIRE(res.certified());
  SOSPoly s = sos_poly(res);
  CHECK_FALSE(expand_sos(s, r).is_zero());
  CHECK(verify_certificate(s, QPoly(r), gb));
  auto rr = buchberger({q("x-2", r), q("z", r), q("y^2-2", r)});
  for (const auto& g : s.generators) CHECK(normal_form(g, rr).is_zero());
}

TEST_CASE("sos_in_ideal trivial when a generator has low degree") {
  Ring r = xy();
  auto [res, mult] = sos_in_ideal({q("x", r)}, 2);
  REQUIRE(res.certified());
  SOSPoly s = sos_poly(res);
  std::vector<std::pair<QPoly, QPoly>> terms = {{mult[0], q("x", r)}};
  CHECK(verify_certificate(s, QPoly(r), {}, terms));
  CHECK_FALSE(expand_sos(s, r).is_zero());
}

TEST_CASE("sosdec_ternary decomposes Motzkin in one multiplier round") {
  QPoly m = named_form("Motzkin", xyz());
  TernaryDecomposition dec = sosdec_ternary(m);
  REQUIRE(dec.nums.size() == 1);
  REQUIRE(dec.dens.size() == 1);
  // exact identity f * prod(dens) == prod(nums)
  QPoly lhs = m * expand_sos(dec.dens[0], xyz());
  CHECK(lhs == expand_sos(dec.nums[0], xyz()));
  // denominator generated by {x, y, z} up to scaling
  for (const auto& g : dec.dens[0].generators) {
    CHECK(g.num_terms() == 1);
    CHECK(g.leading_monomial().degree() == 1);
  }
}

TEST_CASE("sosdec_ternary with an SOS input needs no denominator") {
  QPoly f = q("(x^2+y^2+z^2)^2", xyz());
  TernaryDecomposition dec = sosdec_ternary(f);
  CHECK(dec.dens.empty());
  REQUIRE(dec.nums.size() == 1);
  CHECK(expand_sos(dec.nums[0], xyz()) == f);
}

TEST_CASE("sosdec_ternary rejects bad inputs") {
  CHECK_THROWS(sosdec_ternary(q("x^2+y^2", xy())));              // not 3 variables
  CHECK_THROWS(sosdec_ternary(q("x^2+y^2+z", xyz())));           // not homogeneous
  CHECK_THROWS(sosdec_ternary(q("x^3+y^3+z^3", xyz())));         // odd degree
}

TEST_CASE("lower bound for the dehomogenized Motzkin polynomial") {
  Ring xz({"x", "z"});
  QPoly f = named_form("Motzkin", {QPoly::variable(xz, 0), QPoly::constant(xz, 1),
                                   QPoly::variable(xz, 1)});
  REQUIRE(f == q("x^4+x^2-3*x^2*z^2+z^6", xz));
  SolveOptions opts;
  opts.round_tol = 12;
  LowerBoundResult lb = lower_bound(f, opts);
  REQUIRE(lb.found);
  REQUIRE(lb.exact);
  CHECK(lb.bound == Rational(-729, 4096));
  SOSPoly s = sos_poly(lb.result);
  CHECK(verify_certificate(s, f - QPoly::constant(xz, lb.bound)));
}

TEST_CASE("hypercube lower bound in the quotient ring") {
  Ring r = xy();
  auto gb = buchberger({q("x^2-x", r), q("y^2-y", r)});
  QPoly f = q("x-y", r);
  LowerBoundResult lb = lower_bound(f, gb, 2);
  REQUIRE(lb.found);
  REQUIRE(lb.exact);
  CHECK(lb.bound == Rational(-1));
  SOSPoly s = sos_poly(lb.result);
  CHECK(verify_certificate(s, f - QPoly::constant(r, lb.bound), gb));

  auto sol = recover_solution(lb.result);
  REQUIRE(sol.has_value());
  CHECK(std::abs((*sol)["x"] - 0.0) < 1e-5);
  CHECK(std::abs((*sol)["y"] - 1.0) < 1e-5);
}

TEST_CASE("hypercube lower bound in multiplier form") {
  Ring r = xy();
  QPoly f = q("x-y", r);
  std::vector<QPoly> h = {q("x^2-x", r), q("y^2-y", r)};
  LowerBoundResult lb = lower_bound(f, h, 2);
  REQUIRE(lb.found);
  REQUIRE(lb.exact);
  CHECK(lb.bound == Rational(-1));
  REQUIRE(lb.multipliers.size() == 2);
  SOSPoly s = sos_poly(lb.result);
  std::vector<std::pair<QPoly, QPoly>> terms;
  for (size_t i = 0; i < h.size(); ++i) terms.emplace_back(lb.multipliers[i], h[i]);
  CHECK(verify_certificate(s, f - QPoly::constant(r, lb.bound), {}, terms));
}

TEST_CASE("lower bound monotonicity in the degree bound") {
  Ring r = xy();
  auto gb = buchberger({q("x^2-x", r), q("y^2-y", r)});
  QPoly f = q("x-y", r);
  LowerBoundResult lb2 = lower_bound(f, gb, 2);
  LowerBoundResult lb4 = lower_bound(f, gb, 4);
  REQUIRE(lb2.exact);
  REQUIRE(lb4.exact);
  CHECK(lb2.bound <= lb4.bound);
  CHECK(lb4.bound == Rational(-1));
}

TEST_CASE("parametric Robinson becomes SOS") {
  Ring ext({"x", "y", "z", "s", "t"});
  QPoly g = named_form("Robinson", {QPoly::variable(ext, 0), QPoly::variable(ext, 1),
                                    QPoly::variable(ext, 2)}) +
            QPoly::variable(ext, 3) * q("x^6", ext) + QPoly::variable(ext, 4) * q("y^6", ext);
  SolveOptions opts;
  opts.round_tol = 8;
  SDPResult res = solve_sos(g, opts, {}, {}, {"s", "t"});
  REQUIRE(res.certified());
  REQUIRE(res.params_exact.size() == 2);
  // the certificate proves Robinson + s x^6 + t y^6 is SOS at the found values
  Ring r = xyz();
  QPoly target = named_form("Robinson", r) +
                 res.params_exact[0] * q("x^6", r) + res.params_exact[1] * q("y^6", r);
  CHECK(verify_certificate(sos_poly(res), target));
}

TEST_CASE("fixed Robinson + 34 x^6 + 34 y^6 is SOS") {
  Ring r = xyz();
  QPoly f = named_form("Robinson", r) + Rational(34) * q("x^6", r) + Rational(34) * q("y^6", r);
  SolveOptions opts;
  opts.round_tol = 10;
  SDPResult res = solve_sos(f, opts);
  REQUIRE(res.certified());
  CHECK(verify_certificate(sos_poly(res), f));
}

TEST_CASE("recover_solution on a synthetic rank-one moment matrix") {
  SDPResult res;
  res.ring = xy();
  res.basis = {Monomial({1, 0}), Monomial({0, 1}), Monomial({0, 0})};
  Eigen::Vector3d m(0.7, -0.3, 1.0);  // order (x, y, 1)
  res.moment = m * m.transpose();
  auto sol = recover_solution(res);
  REQUIRE(sol.has_value());
  CHECK((*sol)["x"] == Catch::Approx(0.7));
  CHECK((*sol)["y"] == Catch::Approx(-0.3));
}

TEST_CASE("recover_solution fails on rank > 1 or missing monomials") {
  SDPResult res;
  res.ring = xy();
  res.basis = {Monomial({1, 0}), Monomial({0, 1}), Monomial({0, 0})};
  res.moment = Eigen::Matrix3d::Identity();
  CHECK_FALSE(recover_solution(res).has_value());
  // unconstrained Motzkin bound: basis lacks first-degree monomials
  Ring xz({"x", "z"});
  QPoly f = q("x^4+x^2-3*x^2*z^2+z^6", xz);
  SolveOptions opts;
  opts.round_tol = 12;
  LowerBoundResult lb = lower_bound(f, opts);
  REQUIRE(lb.found);
  CHECK_FALSE(recover_solution(lb.result).has_value());
}

TEST_CASE("named forms") {
  Ring r = xyz();
  QPoly m = named_form("Motzkin", r);
  CHECK(m == q("x^4*y^2+x^2*y^4-3*x^2*y^2*z^2+z^6", r));
  QPoly rob = named_form("Robinson", r);
  std::vector<Rational> p111 = {1, 1, 1};
  CHECK(rob.eval(p111) == 0);
  std::vector<Rational> p110 = {1, 1, 0};
  CHECK(rob.eval(p110) == 0);
  // full S3 symmetry
  std::vector<QPoly> perm = {QPoly::variable(r, 1), QPoly::variable(r, 2), QPoly::variable(r, 0)};
  CHECK(rob.substitute(perm) == rob);
  std::vector<QPoly> sw = {QPoly::variable(r, 1), QPoly::variable(r, 0), QPoly::variable(r, 2)};
  CHECK(rob.substitute(sw) == rob);
  CHECK_THROWS_AS(named_form("NoSuchForm", r), std::invalid_argument);
  CHECK_THROWS(named_form("Motzkin", {QPoly::variable(r, 0), QPoly::variable(r, 1)}));
}

TEST_CASE("round_tol < 0 skips rounding and returns floats") {
  auto f = q("2*x^4+5*y^4-2*x^2*y^2+2*x^3*y", xy());
  SolveOptions opts;
  opts.round_tol = -1;
  SDPResult res = solve_sos(f, opts);
  REQUIRE(res.status == SolveStatus::Feasible);
  CHECK_FALSE(res.rounded);
  CHECK_FALSE(res.gram_exact.has_value());
  CHECK(res.gram_float.rows() == 3);
}

TEST_CASE("soundness on a corpus of random certificates") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 8), cnt(1, 3);
  SolveOptions opts;
  opts.round_tol = 10;
  int done = 0;
  for (int t = 0; t < 40; ++t) {
    std::vector<Rational> w;
    std::vector<QPoly> gens;
    int k = cnt(rng);
    for (int i = 0; i < k; ++i) {
      Rational lam(std::abs(num(rng)) + 1, den(rng));
      w.push_back(lam);
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
    REQUIRE(res.status == SolveStatus::Feasible);
    REQUIRE(res.rounded);
    CHECK(verify_certificate(sos_poly(res), f));
  }
  CHECK(done >= 35);
}
