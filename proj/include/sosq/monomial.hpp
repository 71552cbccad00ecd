#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sosq {

/// Exponent vector of a power product; one entry per ring variable.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_)
      if (e < 0) throw std::invalid_argument("negative exponent");
  }
  static Monomial one(int nvars) { return Monomial(std::vector<int>(nvars, 0)); }
  static Monomial var(int i, int nvars, int power = 1) {
    std::vector<int> e(nvars, 0);
    e.at(i) = power;
    return Monomial(std::move(e));
  }

  int nvars() const { return static_cast<int>(exps_.size()); }
  int exponent(int i) const { return exps_.at(i); }
  const std::vector<int>& exponents() const { return exps_; }
  int degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }
  bool is_one() const {
    return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
  }

  Monomial operator*(const Monomial& o) const {
    check(o);
    std::vector<int> e(exps_);
    for (size_t i = 0; i < e.size(); ++i) e[i] += o.exps_[i];
    return Monomial(std::move(e));
  }
  bool divides(const Monomial& o) const {
    check(o);
    for (size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > o.exps_[i]) return false;
    return true;
  }
  /// Quotient o / this; caller guarantees divisibility.
  Monomial divide_into(const Monomial& o) const {
    check(o);
    std::vector<int> e(o.exps_);
    for (size_t i = 0; i < e.size(); ++i) {
      e[i] -= exps_[i];
      if (e[i] < 0) throw std::invalid_argument("monomial division not exact");
    }
    return Monomial(std::move(e));
  }
  Monomial lcm(const Monomial& o) const {
    check(o);
    std::vector<int> e(exps_);
    for (size_t i = 0; i < e.size(); ++i) e[i] = std::max(e[i], o.exps_[i]);
    return Monomial(std::move(e));
  }
  bool coprime(const Monomial& o) const {
    check(o);
    for (size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > 0 && o.exps_[i] > 0) return false;
    return true;
  }

  bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
  bool operator!=(const Monomial& o) const { return exps_ != o.exps_; }

 private:
  void check(const Monomial& o) const {
    if (exps_.size() != o.exps_.size()) throw std::invalid_argument("monomial arity mismatch");
  }
  std::vector<int> exps_;
};

/// Graded reverse lexicographic order: returns <0 if a < b, 0 if equal, >0 if a > b.
inline int grevlex_compare(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  for (int i = a.nvars() - 1; i >= 0; --i) {
    int d = a.exponent(i) - b.exponent(i);
    if (d != 0) return d > 0 ? -1 : 1;  // last nonzero of a-b positive => a smaller
  }
  return 0;
}

/// Comparator putting the grevlex-largest monomial first (term maps iterate leading-first).
struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_compare(a, b) > 0; }
};
struct GrevlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_compare(a, b) < 0; }
};

/// All monomials in nvars variables with mindeg <= degree <= maxdeg, sorted descending.
inline std::vector<Monomial> monomials_up_to_degree(int nvars, int maxdeg, int mindeg = 0) {
  std::vector<Monomial> out;
  std::vector<int> e(nvars, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == nvars - 1) {
      for (int d = 0; d <= left; ++d) {
        e[pos] = d;
        Monomial m(e);
        if (m.degree() >= mindeg) out.push_back(m);
      }
      e[pos] = 0;
      return;
    }
    for (int d = 0; d <= left; ++d) {
      e[pos] = d;
      self(self, pos + 1, left - d);
    }
    e[pos] = 0;
  };
  if (nvars == 0) {
    if (mindeg <= 0) out.push_back(Monomial(std::vector<int>{}));
    return out;
  }
  rec(rec, 0, maxdeg);
  std::sort(out.begin(), out.end(), GrevlexGreater{});
  return out;
}

}  // namespace sosq
