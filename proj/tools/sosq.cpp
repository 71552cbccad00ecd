// Command-line frontend: decide SOS membership, compute certificates and
// bounds, and emit/re-verify JSON certificate documents.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sosq/sosq.hpp"

using namespace sosq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoCertificate = 2;

std::vector<std::string> split_top_level(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

Ring make_ring(const std::string& ring_spec, const std::vector<std::string>& params) {
  if (ring_spec.empty()) throw std::runtime_error("--ring is required (e.g. --ring x,y)");
  std::vector<std::string> vars;
  for (auto& v : split_top_level(ring_spec, ',')) {
    std::string t;
    for (char c : v)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (!t.empty()) vars.push_back(t);
  }
  for (const auto& p : params) vars.push_back(p);
  return Ring(vars);
}

std::vector<QPoly> parse_poly_list(const std::string& value, const Ring& ring) {
  std::string text = value;
  if (std::filesystem::exists(value)) {
    std::ifstream is(value);
    std::stringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  for (char& c : text)
    if (c == '\n' || c == ';') c = ',';
  std::vector<QPoly> out;
  for (const auto& part : split_top_level(text, ',')) {
    bool blank = true;
    for (char c : part)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    out.push_back(parse_polynomial(part, ring));
  }
  return out;
}

int parse_round_tol(const std::string& s) {
  if (s == "inf" || s == "infinity") return -1;
  return std::stoi(s);
}

void print_status(const SDPResult& r) {
  std::cout << "Status: " << to_string(r.status) << "\n";
  if (!r.message.empty()) std::cout << "Note: " << r.message << "\n";
}

void print_sos(const SOSPoly& s) {
  std::cout << "coeffs: {";
  for (size_t i = 0; i < s.size(); ++i)
    std::cout << (i ? ", " : "") << rational_to_string(s.weights[i]);
  std::cout << "}\n";
  std::cout << "gens: {";
  for (size_t i = 0; i < s.size(); ++i) std::cout << (i ? ", " : "") << s.generators[i].to_string();
  std::cout << "}\n";
}

void write_json_if_requested(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) return;
  CertificateDocument doc;
  doc.json = j;
  doc.json["verified"] = false;
  try {
    doc.json["verified"] = verify_document(doc);
  } catch (const DocumentError&) {
  }
  std::ofstream os(path);
  os << doc.json.dump(2) << "\n";
  if (!os) throw std::runtime_error("could not write " + path);
}

nlohmann::json problem_json(const std::string& kind, const Ring& ring, const std::string& target,
                            const std::vector<QPoly>& ideal, const std::vector<QPoly>& constraints,
                            int degree, const SolveOptions& opts) {
  nlohmann::json p;
  p["kind"] = kind;
  p["ring"] = ring.vars();
  if (!target.empty()) p["target"] = target;
  if (!ideal.empty()) {
    p["ideal"] = nlohmann::json::array();
    for (const auto& g : ideal) p["ideal"].push_back(g.to_string());
  }
  if (!constraints.empty()) {
    p["constraints"] = nlohmann::json::array();
    for (const auto& g : constraints) p["constraints"].push_back(g.to_string());
  }
  if (degree > 0) p["degree"] = degree;
  p["options"] = {{"trace_obj", opts.trace_obj}, {"round_tol", opts.round_tol}};
  return p;
}

struct CommonFlags {
  std::string ring_spec;
  std::string ideal_spec;
  std::string constraints_spec;
  std::string round_tol = "3";
  std::string solver = "builtin";
  std::string solver_path;
  std::string params_spec;
  std::string objective_spec;
  std::string json_path;
  int degree = 0;
  bool trace_obj = false;
  bool quotient = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_ideal = true) {
  cmd->add_option("--ring", f.ring_spec, "comma-separated ring variables, e.g. x,y,z");
  cmd->add_option("--round-tol", f.round_tol, "rounding precision bound K, or 'inf' to skip");
  cmd->add_option("--solver", f.solver, "builtin|external")
      ->check(CLI::IsMember({"builtin", "external"}));
  cmd->add_option("--solver-path", f.solver_path, "external solver executable");
  cmd->add_option("--json", f.json_path, "write a certificate document to this file");
  if (with_ideal) {
    cmd->add_option("--ideal", f.ideal_spec, "ideal generators (inline, comma-separated, or a file)");
    cmd->add_option("--degree", f.degree, "degree bound 2d");
  }
}

SolveOptions make_opts(const CommonFlags& f) {
  SolveOptions o;
  o.round_tol = parse_round_tol(f.round_tol);
  o.trace_obj = f.trace_obj;
  o.solver = (f.solver == "external") ? SolverChoice::External : SolverChoice::Builtin;
  o.solver_path = f.solver_path;
  return o;
}

int cmd_decompose(const CommonFlags& f, const std::string& poly_text) {
  std::vector<std::string> params;
  if (!f.params_spec.empty())
    for (auto& p : split_top_level(f.params_spec, ',')) params.push_back(p);
  Ring ring = make_ring(f.ring_spec, params);
  QPoly target = parse_polynomial(poly_text, ring);
  SolveOptions opts = make_opts(f);

  std::optional<GroebnerBasis> gb;
  std::vector<QPoly> ideal_gens;
  Ring base = ring;
  if (!f.ideal_spec.empty()) {
    if (!params.empty()) throw std::runtime_error("--ideal and --params cannot be combined");
    ideal_gens = parse_poly_list(f.ideal_spec, ring);
    gb = buchberger(ideal_gens);
    if (f.degree <= 0) throw std::runtime_error("--degree 2d is required with --ideal");
  }
  std::vector<Rational> obj_coeffs;
  if (!f.objective_spec.empty()) {
    if (params.empty()) throw std::runtime_error("--objective requires --params");
    QPoly obj = parse_polynomial(f.objective_spec, ring);
    for (const auto& [m, c] : obj.terms()) {
      if (m.degree() > 1) throw std::runtime_error("--objective must be linear in the parameters");
    }
    for (const auto& p : params) {
      int idx = ring.index_of(p);
      obj_coeffs.push_back(obj.coefficient(Monomial::var(idx, ring.nvars())));
    }
  }

  SDPResult res = solve_sos(target, opts, gb, f.degree > 0 ? std::optional<int>(f.degree) : std::nullopt,
                            params, obj_coeffs);
  print_status(res);
  nlohmann::json j;
  j["version"] = 1;
  j["problem"] = problem_json("decompose", ring, target.to_string(), ideal_gens, {}, f.degree, opts);
  nlohmann::json result;
  result["status"] = to_string(res.status);
  if (res.certified()) {
    SOSPoly cert = sos_poly(res);
    print_sos(cert);
    result.update(detail::sos_to_json(cert));
    if (!params.empty()) {
      nlohmann::json pj;
      for (size_t i = 0; i < params.size(); ++i)
        pj[params[i]] = rational_to_string(res.params_exact[i]);
      result["parameters"] = pj;
      std::cout << "Parameters:";
      for (size_t i = 0; i < params.size(); ++i)
        std::cout << " " << params[i] << " = " << rational_to_string(res.params_exact[i]);
      std::cout << "\n";
    }
  }
  j["result"] = result;
  write_json_if_requested(f.json_path, j);
  return res.certified() ? kExitOk : kExitNoCertificate;
}

int cmd_in_ideal(const CommonFlags& f, const std::vector<std::string>& gens_text) {
  Ring ring = make_ring(f.ring_spec, {});
  SolveOptions opts = make_opts(f);
  if (f.degree <= 0) throw std::runtime_error("--degree 2d is required");
  std::vector<QPoly> gens;
  for (const auto& t : gens_text) gens.push_back(parse_polynomial(t, ring));
  if (gens.empty() && !f.ideal_spec.empty()) gens = parse_poly_list(f.ideal_spec, ring);
  if (gens.empty()) throw std::runtime_error("no ideal generators given");

  nlohmann::json j;
  j["version"] = 1;
  nlohmann::json result;
  SDPResult res;
  std::vector<QPoly> mult;
  if (f.quotient) {
    GroebnerBasis gb = buchberger(gens);
    res = sos_in_ideal(gb, f.degree, opts);
    j["problem"] = problem_json("in-ideal-quotient", ring, "", gens, {}, f.degree, opts);
  } else {
    std::tie(res, mult) = sos_in_ideal(gens, f.degree, opts);
    j["problem"] = problem_json("in-ideal", ring, "", {}, gens, f.degree, opts);
  }
  print_status(res);
  result["status"] = to_string(res.status);
  if (res.certified()) {
    SOSPoly cert = sos_poly(res);
    print_sos(cert);
    result.update(detail::sos_to_json(cert));
    if (!f.quotient) {
      result["multipliers"] = nlohmann::json::array();
      for (const auto& l : mult) result["multipliers"].push_back(l.to_string());
    }
  }
  j["result"] = result;
  write_json_if_requested(f.json_path, j);
  return res.certified() ? kExitOk : kExitNoCertificate;
}

int cmd_ternary(const CommonFlags& f, const std::string& poly_text) {
  Ring ring = make_ring(f.ring_spec, {});
  QPoly target = parse_polynomial(poly_text, ring);
  SolveOptions opts = make_opts(f);
  TernaryDecomposition dec;
  try {
    dec = sosdec_ternary(target, opts);
  } catch (const std::runtime_error& e) {
    std::cout << "Status: unknown\nNote: " << e.what() << "\n";
    return kExitNoCertificate;
  }
  std::cout << "Status: SDP solved, primal-dual feasible\n";
  std::cout << "numerators: " << dec.nums.size() << ", denominators: " << dec.dens.size() << "\n";
  if (!dec.nums.empty()) {
    std::cout << "first numerator\n";
    print_sos(dec.nums.front());
  }
  if (!dec.dens.empty()) {
    std::cout << "first denominator\n";
    print_sos(dec.dens.front());
  }
  nlohmann::json j;
  j["version"] = 1;
  j["problem"] = problem_json("ternary", ring, target.to_string(), {}, {}, 0, opts);
  nlohmann::json result;
  result["status"] = "SDP solved, primal-dual feasible";
  result["nums"] = nlohmann::json::array();
  result["dens"] = nlohmann::json::array();
  for (const auto& s : dec.nums) result["nums"].push_back(detail::sos_to_json(s));
  for (const auto& s : dec.dens) result["dens"].push_back(detail::sos_to_json(s));
  j["result"] = result;
  write_json_if_requested(f.json_path, j);
  return kExitOk;
}

int cmd_lower_bound(const CommonFlags& f, const std::string& poly_text, bool do_recover) {
  Ring ring = make_ring(f.ring_spec, {});
  QPoly target = parse_polynomial(poly_text, ring);
  SolveOptions opts = make_opts(f);

  LowerBoundResult lb;
  std::vector<QPoly> ideal_gens, constraint_gens;
  std::string kind = "lower-bound";
  if (!f.constraints_spec.empty()) {
    constraint_gens = parse_poly_list(f.constraints_spec, ring);
    if (f.degree <= 0) throw std::runtime_error("--degree 2d is required with --constraints");
    lb = lower_bound(target, constraint_gens, f.degree, opts);
    kind = "lower-bound-multipliers";
  } else if (!f.ideal_spec.empty()) {
    ideal_gens = parse_poly_list(f.ideal_spec, ring);
    if (f.degree <= 0) throw std::runtime_error("--degree 2d is required with --ideal");
    lb = lower_bound(target, buchberger(ideal_gens), f.degree, opts);
  } else {
    lb = lower_bound(target, opts, f.degree > 0 ? std::optional<int>(f.degree) : std::nullopt);
  }
  print_status(lb.result);
  nlohmann::json j;
  j["version"] = 1;
  j["problem"] =
      problem_json(kind, ring, target.to_string(), ideal_gens, constraint_gens, f.degree, opts);
  nlohmann::json result;
  result["status"] = to_string(lb.result.status);
  bool ok = lb.found && lb.exact;
  if (lb.found) {
    if (lb.exact) {
      std::cout << "bound: " << rational_to_string(lb.bound) << "\n";
      result["bound"] = rational_to_string(lb.bound);
      SOSPoly cert = sos_poly(lb.result);
      result.update(detail::sos_to_json(cert));
      if (!constraint_gens.empty()) {
        result["multipliers"] = nlohmann::json::array();
        for (const auto& l : lb.multipliers) result["multipliers"].push_back(l.to_string());
      }
    } else {
      std::cout << "bound (floating point, not certified): " << lb.bound_float << "\n";
      result["bound_float"] = lb.bound_float;
    }
  }
  if (do_recover) {
    auto sol = recover_solution(lb.result);
    if (sol) {
      std::cout << "minimizer:";
      nlohmann::json mj;
      for (const auto& [var, val] : *sol) {
        std::cout << " " << var << " => " << val;
        mj[var] = val;
      }
      std::cout << "\n";
      result["minimizer"] = mj;
    } else {
      std::cout << "minimizer: not recoverable (moment matrix not rank one)\n";
      ok = false;
    }
  }
  j["result"] = result;
  write_json_if_requested(f.json_path, j);
  return ok ? kExitOk : kExitNoCertificate;
}

int cmd_verify(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitError;
  }
  std::stringstream ss;
  ss << is.rdbuf();
  CertificateDocument doc = CertificateDocument::parse(ss.str());
  bool ok = verify_document(doc);
  std::cout << "verified: " << (ok ? "true" : "false") << "\n";
  return ok ? kExitOk : kExitNoCertificate;
}

int cmd_forms(const std::string& name, const std::string& ring_spec, const std::string& at) {
  if (name.empty()) {
    for (const auto& n : named_form_list()) std::cout << n << "\n";
    return kExitOk;
  }
  Ring ring = make_ring(ring_spec.empty() ? "x,y,z" : ring_spec, {});
  QPoly form(ring);
  if (!at.empty()) {
    auto parts = split_top_level(at, ',');
    if (parts.size() != 3) throw std::runtime_error("--at needs exactly 3 comma-separated values");
    std::vector<QPoly> vals;
    for (const auto& p : parts) vals.push_back(parse_polynomial(p, ring));
    form = named_form(name, vals);
  } else {
    form = named_form(name, ring);
  }
  std::cout << form.to_string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sums-of-squares certificates over the rationals"};
  app.require_subcommand(1);

  CommonFlags fd, fi, ft, fl, fr;
  std::string poly_text, verify_path, forms_name, forms_at, forms_ring;
  std::vector<std::string> gens_text;

  auto* decompose = app.add_subcommand("decompose", "rational SOS decomposition of a polynomial");
  add_common(decompose, fd);
  decompose->add_flag("--trace-obj", fd.trace_obj, "minimize trace of the Gram matrix");
  decompose->add_option("--params", fd.params_spec, "comma-separated parameter names");
  decompose->add_option("--objective", fd.objective_spec, "linear objective in the parameters");
  decompose->add_option("poly", poly_text, "target polynomial")->required();

  auto* inideal = app.add_subcommand("in-ideal", "nonzero SOS polynomial inside an ideal");
  add_common(inideal, fi);
  inideal->add_flag("--quotient", fi.quotient, "use the quotient-ring formulation");
  inideal->add_option("generators", gens_text, "ideal generators");

  auto* ternary = app.add_subcommand("ternary", "ternary form as a quotient of SOS polynomials");
  add_common(ternary, ft, false);
  ternary->add_option("poly", poly_text, "ternary form")->required();

  auto* lower = app.add_subcommand("lower-bound", "certified SOS lower bound");
  add_common(lower, fl);
  lower->add_option("--constraints", fl.constraints_spec,
                    "equality constraints h_i for the multiplier form");
  lower->add_option("poly", poly_text, "objective polynomial")->required();

  auto* recover = app.add_subcommand("recover", "lower bound plus minimizer recovery");
  add_common(recover, fr);
  recover->add_option("--constraints", fr.constraints_spec,
                      "equality constraints h_i for the multiplier form");
  recover->add_option("poly", poly_text, "objective polynomial")->required();

  auto* verify = app.add_subcommand("verify", "re-verify a certificate document");
  verify->add_option("file", verify_path, "certificate JSON file")->required();

  auto* forms = app.add_subcommand("forms", "library of named nonnegative forms");
  forms->add_option("name", forms_name, "form name (omit to list)");
  forms->add_option("--ring", forms_ring, "target ring (default x,y,z)");
  forms->add_option("--at", forms_at, "three substitution values, e.g. x,1,z");

  CLI11_PARSE(app, argc, argv);

  try {
    if (decompose->parsed()) return cmd_decompose(fd, poly_text);
    if (inideal->parsed()) return cmd_in_ideal(fi, gens_text);
    if (ternary->parsed()) return cmd_ternary(ft, poly_text);
    if (lower->parsed()) return cmd_lower_bound(fl, poly_text, false);
    if (recover->parsed()) return cmd_lower_bound(fr, poly_text, true);
    if (verify->parsed()) return cmd_verify(verify_path);
    if (forms->parsed()) return cmd_forms(forms_name, forms_ring, forms_at);
  } catch (const DocumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
