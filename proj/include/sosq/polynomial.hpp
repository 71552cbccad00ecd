#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sosq/monomial.hpp"
#include "sosq/rational.hpp"
#include "sosq/ring.hpp"

namespace sosq {

/// Multivariate polynomial with coefficients K (Rational or double).
/// Terms are stored leading-first under grevlex; zero coefficients are never stored.
template <typename K>
class Polynomial {
 public:
  using TermMap = std::map<Monomial, K, GrevlexGreater>;

  Polynomial() = default;
  explicit Polynomial(Ring ring) : ring_(std::move(ring)) {}
  Polynomial(Ring ring, TermMap terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
    prune();
  }

  static Polynomial constant(Ring ring, const K& c) {
    Polynomial p(ring);
    if (!(c == K(0))) p.terms_.emplace(Monomial::one(p.ring_.nvars()), c);
    return p;
  }
  static Polynomial variable(Ring ring, int i) {
    Polynomial p(ring);
    p.terms_.emplace(Monomial::var(i, p.ring_.nvars()), K(1));
    return p;
  }
  static Polynomial monomial_term(Ring ring, Monomial m, const K& c) {
    Polynomial p(ring);
    if (!(c == K(0))) p.terms_.emplace(std::move(m), c);
    return p;
  }

  const Ring& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int num_terms() const { return static_cast<int>(terms_.size()); }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;  // -1 for the zero polynomial
  }

  K coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? K(0) : it->second;
  }
  const Monomial& leading_monomial() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return terms_.begin()->first;
  }
  const K& leading_coefficient() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return terms_.begin()->second;
  }

  void add_term(const Monomial& m, const K& c) {
    if (c == K(0)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == K(0)) terms_.erase(it);
    }
  }

  Polynomial operator-() const {
    Polynomial r(ring_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    if (this == &o) return *this = K(2) * *this;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    if (this == &o) {
      terms_.clear();
      return *this;
    }
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial r(a.ring_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend Polynomial operator*(const K& s, const Polynomial& p) {
    Polynomial r(p.ring_);
    if (s == K(0)) return r;
    for (const auto& [m, c] : p.terms_) r.terms_.emplace(m, s * c);
    return r;
  }
  friend Polynomial operator*(const Polynomial& p, const K& s) { return s * p; }
  Polynomial& operator*=(const K& s) { return *this = s * *this; }

  Polynomial pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative power");
    Polynomial r = constant(ring_, K(1));
    Polynomial base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  bool operator==(const Polynomial& o) const { return ring_ == o.ring_ && terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  K eval(const std::vector<K>& point) const {
    if (static_cast<int>(point.size()) != ring_.nvars())
      throw std::invalid_argument("eval: wrong point arity");
    K total(0);
    for (const auto& [m, c] : terms_) {
      K t = c;
      for (int i = 0; i < ring_.nvars(); ++i)
        for (int e = 0; e < m.exponent(i); ++e) t *= point[i];
      total += t;
    }
    return total;
  }

  /// Image under x_i -> values[i]; values live in a common target ring.
  Polynomial substitute(const std::vector<Polynomial>& values) const {
    if (static_cast<int>(values.size()) != ring_.nvars())
      throw std::invalid_argument("substitute: assignment must cover every variable");
    Ring target = values.empty() ? ring_ : values.front().ring();
    for (const auto& v : values)
      if (v.ring() != target) throw std::invalid_argument("substitute: mixed target rings");
    Polynomial r(target);
    for (const auto& [m, c] : terms_) {
      Polynomial t = constant(target, c);
      for (int i = 0; i < ring_.nvars(); ++i)
        if (m.exponent(i) > 0) t = t * values[i].pow(m.exponent(i));
      r += t;
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string cs = coeff_string(c);
      bool neg = !cs.empty() && cs[0] == '-';
      if (first) {
        if (neg) os << "-";
      } else {
        os << (neg ? "-" : "+");
      }
      if (neg) cs = cs.substr(1);
      first = false;
      bool unit_coeff = (cs == "1");
      if (m.is_one()) {
        os << cs;
        continue;
      }
      bool printed = false;
      if (!unit_coeff) {
        os << cs;
        printed = true;
      }
      for (int i = 0; i < ring_.nvars(); ++i) {
        int e = m.exponent(i);
        if (e == 0) continue;
        if (printed) os << "*";
        os << ring_.var(i);
        if (e > 1) os << "^" << e;
        printed = true;
      }
    }
    return os.str();
  }

 private:
  void check(const Polynomial& o) const {
    if (ring_ != o.ring_) throw std::invalid_argument("polynomial ring mismatch");
  }
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second == K(0))
        it = terms_.erase(it);
      else
        ++it;
    }
  }
  static std::string coeff_string(const Rational& c) { return rational_to_string(c); }
  static std::string coeff_string(double c) {
    std::ostringstream os;
    os.precision(17);
    os << c;
    return os.str();
  }

  Ring ring_;
  TermMap terms_;
};

using QPoly = Polynomial<Rational>;
using DPoly = Polynomial<double>;

inline DPoly to_float(const QPoly& p) {
  DPoly r(p.ring());
  for (const auto& [m, c] : p.terms()) r.add_term(m, to_double(c));
  return r;
}

inline QPoly to_exact(const DPoly& p) {
  QPoly r(p.ring());
  for (const auto& [m, c] : p.terms()) r.add_term(m, rational_from_double(c));
  return r;
}

}  // namespace sosq
