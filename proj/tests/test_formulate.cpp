#include <catch_amalgamated.hpp>
#include <random>

#include "sosq/formulate.hpp"
#include "sosq/groebner.hpp"
#include "sosq/parse.hpp"

using namespace sosq;

namespace {

Ring xy() { return Ring({"x", "y"}); }
QPoly q(const std::string& s, const Ring& r) { return parse_polynomial(s, r); }

}  // namespace

TEST_CASE("monomial basis for the paper quartic") {
  auto f = q("2*x^4+5*y^4-2*x^2*y^2+2*x^3*y", xy());
  auto basis = monomial_basis(f, 4);
  REQUIRE(basis.size() == 3);
  CHECK(basis[0] == Monomial({2, 0}));
  CHECK(basis[1] == Monomial({1, 1}));
  CHECK(basis[2] == Monomial({0, 2}));
}

TEST_CASE("newton polytope pruning keeps a single vertex for x^2") {
  auto basis = monomial_basis(q("x^2", xy()), 2);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == Monomial({1, 0}));
}

TEST_CASE("quotient basis uses standard monomials") {
  auto gb = buchberger({q("x^2+y^2-1", xy())});
  auto basis = monomial_basis(q("10-x^2-y", xy()), 2, gb);
  REQUIRE(basis.size() == 3);
  CHECK(basis[0] == Monomial({1, 0}));
  CHECK(basis[1] == Monomial({0, 1}));
  CHECK(basis[2] == Monomial({0, 0}));
}

TEST_CASE("odd or too-small degree bounds are rejected") {
  auto f = q("x^2", xy());
  CHECK_THROWS_AS(monomial_basis(f, 3), FormulationError);
  CHECK_THROWS_AS(monomial_basis(q("x^4", xy()), 2), FormulationError);
}

TEST_CASE("gram problem for the paper quartic has 5 rows") {
  auto f = q("2*x^4+5*y^4-2*x^2*y^2+2*x^3*y", xy());
  auto basis = monomial_basis(f, 4);
  auto [prob, inst] = build_gram_problem(xy(), f, basis);
  REQUIRE(prob.rows.size() == 5);
  REQUIRE(inst.num_constraints() == 5);
  CHECK(inst.block_sizes == std::vector<int>({3}));
  // coefficients of x^4, x^3y, x^2y^2, xy^3, y^4 in descending order
  std::map<std::string, Rational> want = {
      {"x^4", 2}, {"x^3*y", 2}, {"x^2*y^2", -2}, {"x*y^3", 0}, {"y^4", 5}};
  for (const auto& row : prob.rows) {
    std::string label = QPoly::monomial_term(xy(), row.label, Rational(1)).to_string();
    REQUIRE(want.count(label));
    CHECK(row.rhs == want[label]);
  }
}

TEST_CASE("single-square problem pins the lone entry") {
  auto f = q("x^2", xy());
  auto [prob, inst] = build_gram_problem(xy(), f, monomial_basis(f, 2));
  REQUIRE(prob.rows.size() == 1);
  REQUIRE(prob.rows[0].gram.size() == 1);
  CHECK(prob.rows[0].gram.at({0, 0}) == 1);
  CHECK(prob.rows[0].rhs == 1);
}

TEST_CASE("unrepresentable monomial is a formulation error") {
  auto f = q("x^2 + y^4", xy());
  auto basis = monomial_basis(q("x^2", xy()), 2);  // {x} cannot reach y^4
  CHECK_THROWS_AS(build_gram_problem(xy(), f, basis), FormulationError);
}

TEST_CASE("quotient rows reduce products by the ideal") {
  auto gb = buchberger({q("x^2+y^2-1", xy())});
  auto f = q("10-x^2-y", xy());
  auto basis = standard_monomials(gb, 1);
  auto [prob, inst] = build_gram_problem(xy(), f, basis, gb);
  // identity: (Q11+Q22) + 2Q12 x + 2Q13 y + 2Q23 xy + (Q33-Q22) y^2 = 9 - y + y^2
  // with basis ordered (x, y, 1)
  bool found_const = false;
  for (const auto& row : prob.rows) {
    if (row.label == Monomial({0, 0})) {
      found_const = true;
      CHECK(row.rhs == 9);
    }
  }
  CHECK(found_const);
}

TEST_CASE("parameters and multipliers enter rows as free variables") {
  Ring r = xy();
  // v'Qv = (x - t) + l * (y)  with l of degree 0: rows x, y, const ...
  std::vector<MultiplierSlot> slots = {{q("y", r), {Monomial::one(2)}}};
  auto basis = monomials_up_to_degree(2, 1);
  auto [prob, inst] =
      build_gram_problem(r, q("x", r), basis, {}, {"t"}, {q("-1", r)}, slots, GramObjective{});
  CHECK(prob.num_params() == 1);
  CHECK(prob.num_free() == 2);
  CHECK(inst.num_free() == 2);
  bool const_has_t = false, y_has_l = false;
  for (const auto& row : prob.rows) {
    if (row.label == Monomial({0, 0}) && row.free_part.count(0)) const_has_t = true;
    if (row.label == Monomial({0, 1}) && row.free_part.count(1)) y_has_l = true;
  }
  CHECK(const_has_t);
  CHECK(y_has_l);
}

TEST_CASE("trace normalization adds one sdp-only row") {
  auto f = QPoly(xy());
  auto basis = monomials_up_to_degree(2, 1);
  auto [prob, inst] = build_gram_problem(xy(), f, basis, {}, {}, {}, {}, GramObjective{}, true);
  CHECK(inst.num_constraints() == static_cast<int>(prob.rows.size()) + 1);
  CHECK(inst.rhs(inst.num_constraints() - 1) == 1.0);
}

TEST_CASE("index map is a bijection") {
  std::mt19937 rng(55);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    int N = 2 + t % 4;
    Eigen::MatrixXd Q(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) Q(i, j) = Q(j, i) = g(rng);
    CHECK((gram_unpack(gram_pack(Q), N) - Q).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("pruning does not change feasibility on random quartics") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-3, 3);
  int checked = 0;
  for (int t = 0; t < 12 && checked < 8; ++t) {
    // random quartic: sometimes SOS (sum of random squares), sometimes not
    QPoly f(xy());
    if (t % 2 == 0) {
      for (int k = 0; k < 2; ++k) {
        QPoly g(xy());
        for (const auto& m : monomials_up_to_degree(2, 2))
          g += QPoly::monomial_term(xy(), m, Rational(coef(rng)));
        f += g * g;
      }
    } else {
      for (const auto& m : monomials_up_to_degree(2, 4))
        f += QPoly::monomial_term(xy(), m, Rational(coef(rng)));
      f += q("x^4+y^4", xy());  // keep the top degree even-powered
    }
    if (f.is_zero() || f.degree() < 4) continue;
    ++checked;
    auto pruned = monomial_basis(f, 4);
    auto full = monomials_up_to_degree(2, 2);
    if (pruned.empty()) continue;
    // an unmatched monomial means no Gram matrix exists: trivial infeasibility
    auto status_of = [&](const std::vector<Monomial>& basis) {
      try {
        auto [prob, inst] = build_gram_problem(xy(), f, basis);
        return solve_builtin(inst).status;
      } catch (const FormulationError&) {
        return SolveStatus::Infeasible;
      }
    };
    SolveStatus s1 = status_of(pruned);
    SolveStatus s2 = status_of(full);
    if (s1 != SolveStatus::Unknown && s2 != SolveStatus::Unknown) CHECK(s1 == s2);
  }
  CHECK(checked > 0);
}

TEST_CASE("decode_gram extracts gram, moment and free values") {
  auto f = q("x^2+2", xy());
  auto basis = monomial_basis(f, 2);
  auto [prob, inst] = build_gram_problem(xy(), f, basis);
  SDPSolution sol = solve_builtin(inst);
  REQUIRE(sol.status == SolveStatus::Feasible);
  GramDecode d = decode_gram(prob, sol);
  CHECK(d.gram.rows() == static_cast<int>(basis.size()));
  CHECK(d.moment.rows() == d.gram.rows());
  CHECK(d.free_values.size() == 0);
}
