#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sosq/applications.hpp"
#include "sosq/certify.hpp"
#include "sosq/groebner.hpp"
#include "sosq/parse.hpp"
#include "sosq/sos_poly.hpp"

namespace sosq {

struct DocumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Versioned JSON certificate. Rationals are serialized as "num/den" strings
/// and polynomials in the canonical decreasing-monomial-order text, so
/// documents survive round trips exactly.
struct CertificateDocument {
  nlohmann::json json;

  std::string dump(int indent = 2) const { return json.dump(indent); }
  static CertificateDocument parse(const std::string& text) {
    CertificateDocument d;
    try {
      d.json = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      throw DocumentError(std::string("invalid JSON: ") + e.what());
    }
    return d;
  }
};

namespace detail {

inline nlohmann::json sos_to_json(const SOSPoly& s) {
  nlohmann::json j;
  j["weights"] = nlohmann::json::array();
  j["generators"] = nlohmann::json::array();
  for (const auto& w : s.weights) j["weights"].push_back(rational_to_string(w));
  for (const auto& g : s.generators) j["generators"].push_back(g.to_string());
  return j;
}

inline SOSPoly sos_from_json(const nlohmann::json& j, const Ring& ring) {
  if (!j.contains("weights") || !j.contains("generators") || !j["weights"].is_array() ||
      !j["generators"].is_array() || j["weights"].size() != j["generators"].size())
    throw DocumentError("malformed certificate: weights/generators");
  std::vector<Rational> w;
  std::vector<QPoly> g;
  for (const auto& ws : j["weights"]) {
    Rational r;
    try {
      r = rational_from_string(ws.get<std::string>());
    } catch (const std::exception& e) {
      throw DocumentError(std::string("malformed weight: ") + e.what());
    }
    if (r <= 0) throw DocumentError("malformed certificate: weights must be positive");
    w.push_back(r);
  }
  for (const auto& gs : j["generators"]) {
    try {
      g.push_back(parse_polynomial(gs.get<std::string>(), ring));
    } catch (const std::exception& e) {
      throw DocumentError(std::string("malformed generator: ") + e.what());
    }
  }
  return SOSPoly(std::move(w), std::move(g));
}

inline Ring ring_from_json(const nlohmann::json& j) {
  if (!j.contains("ring") || !j["ring"].is_array() || j["ring"].empty())
    throw DocumentError("malformed document: ring");
  std::vector<std::string> vars;
  for (const auto& v : j["ring"]) vars.push_back(v.get<std::string>());
  try {
    return Ring(vars);
  } catch (const std::exception& e) {
    throw DocumentError(std::string("malformed ring: ") + e.what());
  }
}

inline std::vector<QPoly> polys_from_json(const nlohmann::json& arr, const Ring& ring,
                                          const char* what) {
  std::vector<QPoly> out;
  if (!arr.is_array()) throw DocumentError(std::string("malformed document: ") + what);
  for (const auto& t : arr) {
    try {
      out.push_back(parse_polynomial(t.get<std::string>(), ring));
    } catch (const std::exception& e) {
      throw DocumentError(std::string("malformed ") + what + ": " + e.what());
    }
  }
  return out;
}

}  // namespace detail

/// Independent exact re-verification of a certificate document. Re-parses the
/// polynomials, rebuilds the Groebner basis when an ideal is present, and
/// checks the defining identity with exact arithmetic; no solver is consulted.
/// Malformed documents raise DocumentError instead of returning false.
inline bool verify_document(const CertificateDocument& doc) {
  const nlohmann::json& j = doc.json;
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1)
    throw DocumentError("unsupported or missing document version");
  if (!j.contains("problem") || !j.contains("result")) throw DocumentError("missing sections");
  const auto& prob = j["problem"];
  const auto& res = j["result"];
  std::string kind = prob.value("kind", "");
  Ring ring = detail::ring_from_json(prob);

  std::optional<GroebnerBasis> gb;
  if (prob.contains("ideal") && !prob["ideal"].empty()) {
    auto gens = detail::polys_from_json(prob["ideal"], ring, "ideal");
    gb = buchberger(gens);
  }

  auto target_poly = [&]() -> QPoly {
    if (!prob.contains("target")) return QPoly(ring);
    QPoly f;
    try {
      f = parse_polynomial(prob["target"].get<std::string>(), ring);
    } catch (const std::exception& e) {
      throw DocumentError(std::string("malformed target: ") + e.what());
    }
    if (res.contains("parameters") && !res["parameters"].empty()) {
      std::vector<QPoly> subs;
      for (int i = 0; i < ring.nvars(); ++i) {
        const std::string& name = ring.var(i);
        if (res["parameters"].contains(name)) {
          Rational v = rational_from_string(res["parameters"][name].get<std::string>());
          subs.push_back(QPoly::constant(ring, v));
        } else {
          subs.push_back(QPoly::variable(ring, i));
        }
      }
      f = f.substitute(subs);
    }
    return f;
  };

  if (kind == "decompose") {
    SOSPoly cert = detail::sos_from_json(res, ring);
    return verify_certificate(cert, target_poly(), gb);
  }
  if (kind == "in-ideal" || kind == "in-ideal-quotient") {
    SOSPoly cert = detail::sos_from_json(res, ring);
    if (expand_sos(cert, ring).is_zero()) return false;  // a nonzero SOS is required
    if (kind == "in-ideal-quotient") {
      if (!gb) throw DocumentError("in-ideal-quotient requires an ideal");
      return verify_certificate(cert, QPoly(ring), gb);
    }
    auto hs = detail::polys_from_json(prob.value("constraints", nlohmann::json::array()), ring,
                                      "constraints");
    auto ls =
        detail::polys_from_json(res.value("multipliers", nlohmann::json::array()), ring,
                                "multipliers");
    if (hs.size() != ls.size()) throw DocumentError("multiplier/constraint count mismatch");
    std::vector<std::pair<QPoly, QPoly>> terms;
    for (size_t i = 0; i < hs.size(); ++i) terms.emplace_back(ls[i], hs[i]);
    return verify_certificate(cert, QPoly(ring), {}, terms);
  }
  if (kind == "lower-bound" || kind == "lower-bound-multipliers") {
    if (!res.contains("bound")) throw DocumentError("missing bound");
    Rational t = rational_from_string(res["bound"].get<std::string>());
    SOSPoly cert = detail::sos_from_json(res, ring);
    QPoly target = target_poly() - QPoly::constant(ring, t);
    if (kind == "lower-bound-multipliers") {
      auto hs = detail::polys_from_json(prob.value("constraints", nlohmann::json::array()), ring,
                                        "constraints");
      auto ls = detail::polys_from_json(res.value("multipliers", nlohmann::json::array()), ring,
                                        "multipliers");
      if (hs.size() != ls.size()) throw DocumentError("multiplier/constraint count mismatch");
      std::vector<std::pair<QPoly, QPoly>> terms;
      for (size_t i = 0; i < hs.size(); ++i) terms.emplace_back(ls[i], hs[i]);
      return verify_certificate(cert, target, {}, terms);
    }
    return verify_certificate(cert, target, gb);
  }
  if (kind == "ternary") {
    QPoly f = target_poly();
    if (!res.contains("nums") || !res.contains("dens"))
      throw DocumentError("ternary document needs nums and dens");
    QPoly lhs = f;
    for (const auto& dj : res["dens"]) lhs *= expand_sos(detail::sos_from_json(dj, ring), ring);
    QPoly rhs = QPoly::constant(ring, Rational(1));
    for (const auto& nj : res["nums"]) rhs *= expand_sos(detail::sos_from_json(nj, ring), ring);
    return lhs == rhs;
  }
  throw DocumentError("unknown problem kind: " + kind);
}

}  // namespace sosq
