#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

#include "sosq/polynomial.hpp"

namespace sosq {

/// Reduced Groebner basis under grevlex. Generators are monic, sorted with the
/// grevlex-largest leading term first, and no term of any generator is divisible
/// by the leading term of another.
struct GroebnerBasis {
  Ring ring;
  std::vector<QPoly> generators;

  bool is_unit_ideal() const {
    return generators.size() == 1 && generators.front().degree() == 0;
  }
};

/// Remainder of multivariate division of f by the generators of gb.
inline QPoly normal_form(const QPoly& f, const GroebnerBasis& gb) {
  if (gb.generators.empty()) return f;
  if (f.ring() != gb.ring) throw std::invalid_argument("normal_form: ring mismatch");
  QPoly rem(f.ring());
  QPoly work = f;
  while (!work.is_zero()) {
    const Monomial& lm = work.leading_monomial();
    const Rational lc = work.leading_coefficient();
    bool reduced = false;
    for (const auto& g : gb.generators) {
      const Monomial& glm = g.leading_monomial();
      if (glm.divides(lm)) {
        Monomial q = glm.divide_into(lm);
        Rational scale = lc / g.leading_coefficient();
        work -= QPoly::monomial_term(f.ring(), q, scale) * g;
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      rem.add_term(lm, lc);
      work.add_term(lm, -lc);
    }
  }
  return rem;
}

namespace detail {

inline QPoly s_polynomial(const QPoly& f, const QPoly& g) {
  const Monomial& lf = f.leading_monomial();
  const Monomial& lg = g.leading_monomial();
  Monomial l = lf.lcm(lg);
  QPoly a = QPoly::monomial_term(f.ring(), lf.divide_into(l), Rational(1) / f.leading_coefficient());
  QPoly b = QPoly::monomial_term(f.ring(), lg.divide_into(l), Rational(1) / g.leading_coefficient());
  return a * f - b * g;
}

inline QPoly reduce_by(const QPoly& f, const std::vector<QPoly>& gens) {
  GroebnerBasis tmp{f.ring(), gens};
  return normal_form(f, tmp);
}

}  // namespace detail

/// Buchberger's algorithm with the coprime-leading-term criterion and normal
/// (smallest lcm degree first) pair selection; the result is interreduced.
inline GroebnerBasis buchberger(const std::vector<QPoly>& input) {
  if (input.empty()) throw std::invalid_argument("buchberger: empty generator list");
  Ring ring = input.front().ring();
  std::vector<QPoly> basis;
  for (const auto& g : input) {
    if (g.ring() != ring) throw std::invalid_argument("buchberger: mixed rings");
    if (!g.is_zero()) basis.push_back(g);
  }
  if (basis.empty()) return GroebnerBasis{ring, {}};

  struct Pair {
    size_t i, j;
    Monomial lcm;
  };
  auto pair_less = [](const Pair& a, const Pair& b) {
    int da = a.lcm.degree(), db = b.lcm.degree();
    if (da != db) return da < db;
    int c = grevlex_compare(a.lcm, b.lcm);
    if (c != 0) return c < 0;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  };

  std::vector<Pair> queue;
  auto push_pairs_for = [&](size_t j) {
    for (size_t i = 0; i < j; ++i) {
      const Monomial& li = basis[i].leading_monomial();
      const Monomial& lj = basis[j].leading_monomial();
      if (li.coprime(lj)) continue;  // Buchberger's first criterion
      queue.push_back(Pair{i, j, li.lcm(lj)});
    }
    std::sort(queue.begin(), queue.end(), pair_less);
  };
  for (size_t j = 1; j < basis.size(); ++j) push_pairs_for(j);

  while (!queue.empty()) {
    Pair p = queue.front();
    queue.erase(queue.begin());
    QPoly s = detail::s_polynomial(basis[p.i], basis[p.j]);
    QPoly r = detail::reduce_by(s, basis);
    if (!r.is_zero()) {
      basis.push_back(r);
      push_pairs_for(basis.size() - 1);
    }
  }

  // Interreduce to the reduced, monic basis.
  for (;;) {
    bool changed = false;
    for (size_t i = 0; i < basis.size(); ++i) {
      std::vector<QPoly> others;
      for (size_t j = 0; j < basis.size(); ++j)
        if (j != i) others.push_back(basis[j]);
      QPoly r = others.empty() ? basis[i] : detail::reduce_by(basis[i], others);
      if (r.is_zero()) {
        basis.erase(basis.begin() + i);
        changed = true;
        break;
      }
      if (r != basis[i]) {
        basis[i] = r;
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  for (auto& g : basis) g = (Rational(1) / g.leading_coefficient()) * g;
  std::sort(basis.begin(), basis.end(), [](const QPoly& a, const QPoly& b) {
    return grevlex_compare(a.leading_monomial(), b.leading_monomial()) > 0;
  });
  return GroebnerBasis{ring, std::move(basis)};
}

/// Monomials of degree <= maxdeg not divisible by any leading term of gb,
/// sorted with the grevlex-largest first. These span the quotient up to maxdeg.
inline std::vector<Monomial> standard_monomials(const GroebnerBasis& gb, int maxdeg) {
  if (maxdeg < 0) throw std::invalid_argument("standard_monomials: negative degree bound");
  std::vector<Monomial> out;
  for (const auto& m : monomials_up_to_degree(gb.ring.nvars(), maxdeg)) {
    bool divisible = false;
    for (const auto& g : gb.generators)
      if (g.leading_monomial().divides(m)) {
        divisible = true;
        break;
      }
    if (!divisible) out.push_back(m);
  }
  return out;
}

}  // namespace sosq
