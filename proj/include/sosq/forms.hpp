#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sosq/parse.hpp"
#include "sosq/polynomial.hpp"

namespace sosq {

inline std::vector<std::string> named_form_list() { return {"Motzkin", "Robinson", "Choi-Lam"}; }

/// A named nonnegative ternary form with the three arguments substituted in.
inline QPoly named_form(const std::string& name, const std::vector<QPoly>& vars) {
  if (vars.size() != 3) throw std::invalid_argument("named_form: exactly 3 arguments required");
  Ring abc({"a", "b", "c"});
  QPoly form(abc);
  if (name == "Motzkin") {
    form = parse_polynomial("a^4*b^2 + a^2*b^4 - 3*a^2*b^2*c^2 + c^6", abc);
  } else if (name == "Robinson") {
    form = parse_polynomial(
        "a^6 + b^6 + c^6 - (a^4*b^2 + a^2*b^4 + a^4*c^2 + a^2*c^4 + b^4*c^2 + b^2*c^4) "
        "+ 3*a^2*b^2*c^2",
        abc);
  } else if (name == "Choi-Lam") {
    form = parse_polynomial("a^4*b^2 + b^4*c^2 + c^4*a^2 - 3*a^2*b^2*c^2", abc);
  } else {
    std::string known;
    for (const auto& n : named_form_list()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("named_form: unknown form '" + name + "' (known: " + known + ")");
  }
  return form.substitute(vars);
}

inline QPoly named_form(const std::string& name, const Ring& ring) {
  if (ring.nvars() != 3) throw std::invalid_argument("named_form: ring must have 3 variables");
  std::vector<QPoly> vars;
  for (int i = 0; i < 3; ++i) vars.push_back(QPoly::variable(ring, i));
  return named_form(name, vars);
}

}  // namespace sosq
