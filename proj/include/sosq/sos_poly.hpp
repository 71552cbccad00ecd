#pragma once

#include <stdexcept>
#include <vector>

#include "sosq/polynomial.hpp"

namespace sosq {

/// A weighted sum of squares: sum_i weights[i] * generators[i]^2, weights > 0.
struct SOSPoly {
  std::vector<Rational> weights;
  std::vector<QPoly> generators;

  SOSPoly() = default;
  SOSPoly(std::vector<Rational> w, std::vector<QPoly> g)
      : weights(std::move(w)), generators(std::move(g)) {
    if (weights.size() != generators.size())
      throw std::invalid_argument("SOSPoly: weights/generators size mismatch");
    for (const auto& lam : weights)
      if (lam <= 0) throw std::invalid_argument("SOSPoly: weights must be positive");
  }

  bool empty() const { return weights.empty(); }
  size_t size() const { return weights.size(); }
};

inline QPoly expand_sos(const SOSPoly& s, const Ring& ring_if_empty = Ring()) {
  if (s.empty()) return QPoly(ring_if_empty);
  QPoly total(s.generators.front().ring());
  for (size_t i = 0; i < s.size(); ++i) total += s.weights[i] * (s.generators[i] * s.generators[i]);
  return total;
}

}  // namespace sosq
