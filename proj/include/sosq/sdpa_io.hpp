#pragma once

#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sosq/sdp.hpp"

namespace sosq {

namespace detail {

inline void append_entry(std::string& out, int matno, int blockno, int i, int j, double v) {
  if (v == 0.0) return;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d %d %d %d %.17g\n", matno, blockno, i, j, v);
  out += buf;
}

inline void append_block_entries(std::string& out, int matno, int blockno,
                                 const Eigen::MatrixXd& B) {
  for (int i = 0; i < B.rows(); ++i)
    for (int j = i; j < B.cols(); ++j) append_entry(out, matno, blockno, i + 1, j + 1, B(i, j));
}

}  // namespace detail

/// SDPA sparse (.dat-s) text. Free variables are emitted as one trailing
/// diagonal block of size 2p holding the split u = u+ - u-; the objective block
/// (matno 0) carries -C because the format's reader maximizes it.
inline std::string write_sdpa_sparse(const SDPInstance& p) {
  p.validate();
  const int m = p.num_constraints();
  const int pf = p.num_free();
  const int nb = static_cast<int>(p.block_sizes.size());
  std::string out;
  out += std::to_string(m) + "\n";
  out += std::to_string(nb + (pf ? 1 : 0)) + "\n";
  {
    std::string sizes;
    for (int k = 0; k < nb; ++k) {
      if (k) sizes += " ";
      sizes += std::to_string(p.block_sizes[k]);
    }
    if (pf) {
      if (nb) sizes += " ";
      sizes += std::to_string(-2 * pf);
    }
    out += sizes + "\n";
  }
  {
    std::string bline;
    for (int i = 0; i < m; ++i) {
      if (i) bline += " ";
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", p.rhs(i));
      bline += buf;
    }
    out += bline + "\n";
  }
  for (int k = 0; k < nb; ++k) detail::append_block_entries(out, 0, k + 1, -p.objective.blocks[k]);
  for (int u = 0; u < pf; ++u) {
    detail::append_entry(out, 0, nb + 1, 2 * u + 1, 2 * u + 1, -p.free_objective(u));
    detail::append_entry(out, 0, nb + 1, 2 * u + 2, 2 * u + 2, p.free_objective(u));
  }
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < nb; ++k)
      detail::append_block_entries(out, i + 1, k + 1, p.constraints[i].blocks[k]);
    for (int u = 0; u < pf; ++u) {
      detail::append_entry(out, i + 1, nb + 1, 2 * u + 1, 2 * u + 1, p.free_coeffs(i, u));
      detail::append_entry(out, i + 1, nb + 1, 2 * u + 2, 2 * u + 2, -p.free_coeffs(i, u));
    }
  }
  return out;
}

/// Parses SDPA sparse text into a pure conic instance (diagonal blocks are
/// stored dense). Comment lines starting with '"' or '*' are skipped; commas
/// and braces in the header lines are treated as spaces.
inline SDPInstance parse_sdpa_sparse(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
      for (char& c : line)
        if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') c = ' ';
      lines.push_back(line);
    }
  }
  size_t li = 0;
  auto next_line = [&]() -> std::string {
    if (li >= lines.size()) throw std::runtime_error("sdpa parse: unexpected end of input");
    return lines[li++];
  };
  int m = 0, nb = 0;
  {
    std::istringstream is(next_line());
    if (!(is >> m) || m < 0) throw std::runtime_error("sdpa parse: bad constraint count");
  }
  {
    std::istringstream is(next_line());
    if (!(is >> nb) || nb <= 0) throw std::runtime_error("sdpa parse: bad block count");
  }
  std::vector<int> sizes;
  {
    std::istringstream is(next_line());
    int s;
    while (is >> s) sizes.push_back(std::abs(s));
    if (static_cast<int>(sizes.size()) != nb)
      throw std::runtime_error("sdpa parse: block size count mismatch");
  }
  SDPInstance p;
  p.block_sizes = sizes;
  p.rhs = Eigen::VectorXd::Zero(m);
  {
    std::istringstream is(m > 0 ? next_line() : (li < lines.size() ? next_line() : std::string()));
    for (int i = 0; i < m; ++i)
      if (!(is >> p.rhs(i))) throw std::runtime_error("sdpa parse: bad rhs line");
  }
  p.objective = SymmBlockMatrix::zero(sizes);
  p.constraints.assign(m, SymmBlockMatrix::zero(sizes));
  p.free_coeffs = Eigen::MatrixXd::Zero(m, 0);
  p.free_objective = Eigen::VectorXd::Zero(0);
  while (li < lines.size()) {
    std::istringstream is(lines[li++]);
    int matno, blockno, i, j;
    double v;
    if (!(is >> matno >> blockno >> i >> j >> v)) continue;  // blank or malformed tail line
    if (matno < 0 || matno > m || blockno < 1 || blockno > nb)
      throw std::runtime_error("sdpa parse: entry indices out of range");
    Eigen::MatrixXd& B = (matno == 0) ? p.objective.blocks[blockno - 1]
                                      : p.constraints[matno - 1].blocks[blockno - 1];
    if (i < 1 || j < 1 || i > B.rows() || j > B.cols())
      throw std::runtime_error("sdpa parse: entry position out of range");
    B(i - 1, j - 1) = v;
    B(j - 1, i - 1) = v;
  }
  for (auto& b : p.objective.blocks) b = -b;  // undo the writer's negation
  return p;
}

/// Parses a solver solution file: first the dual vector, then matrix entries
/// "matno blockno i j value" with matno 1 = Z and matno 2 = X.
struct SdpaSolution {
  Eigen::VectorXd y;
  SymmBlockMatrix Z, X;
};

inline SdpaSolution parse_sdpa_solution(const std::string& text, int m,
                                        const std::vector<int>& sizes) {
  std::istringstream is(text);
  SdpaSolution sol;
  sol.y = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    if (!(is >> sol.y(i))) throw std::runtime_error("solution parse: bad dual vector");
  sol.Z = SymmBlockMatrix::zero(sizes);
  sol.X = SymmBlockMatrix::zero(sizes);
  int matno, blockno, i, j;
  double v;
  while (is >> matno >> blockno >> i >> j >> v) {
    if (matno != 1 && matno != 2) throw std::runtime_error("solution parse: bad matrix number");
    if (blockno < 1 || blockno > static_cast<int>(sizes.size()))
      throw std::runtime_error("solution parse: block out of range");
    Eigen::MatrixXd& B = (matno == 1 ? sol.Z : sol.X).blocks[blockno - 1];
    if (i < 1 || j < 1 || i > B.rows() || j > B.cols())
      throw std::runtime_error("solution parse: entry out of range");
    B(i - 1, j - 1) = v;
    B(j - 1, i - 1) = v;
  }
  return sol;
}

/// Runs an external SDPA-format solver (e.g. CSDP) in a fresh temporary
/// directory and maps its solution back onto the instance, including the free
/// variables encoded by write_sdpa_sparse.
inline SDPSolution solve_external(const SDPInstance& p, const std::string& solver_path,
                                  const std::string& workdir = "") {
  SDPSolution out;
  out.status = SolveStatus::Unknown;
  out.X = SymmBlockMatrix::zero(p.block_sizes);
  out.Z = SymmBlockMatrix::zero(p.block_sizes);
  out.y = Eigen::VectorXd::Zero(p.num_constraints());
  out.free_values = Eigen::VectorXd::Zero(p.num_free());

  if (::access(solver_path.c_str(), X_OK) != 0) {
    out.message = "solver executable not found or not executable: " + solver_path;
    return out;
  }

  namespace fs = std::filesystem;
  fs::path base = workdir.empty() ? fs::temp_directory_path() : fs::path(workdir);
  std::string tmpl = (base / "sosq-XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!::mkdtemp(buf.data())) {
    out.message = "could not create temporary directory under " + base.string();
    return out;
  }
  fs::path dir(buf.data());
  fs::path prob = dir / "problem.dat-s";
  fs::path solf = dir / "problem.sol";
  fs::path logf = dir / "solver.log";

  auto cleanup = [&]() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  };

  {
    std::ofstream os(prob);
    os << write_sdpa_sparse(p);
    if (!os) {
      out.message = "could not write problem file";
      cleanup();
      return out;
    }
  }
  std::string cmd = "\"" + solver_path + "\" \"" + prob.string() + "\" \"" + solf.string() +
                    "\" > \"" + logf.string() + "\" 2>&1";
  int rc = std::system(cmd.c_str());
  int exit_code = -1;
  if (rc != -1 && WIFEXITED(rc)) exit_code = WEXITSTATUS(rc);

  std::ifstream isf(solf);
  if (!isf) {
    out.message = "solver produced no solution file (exit code " + std::to_string(exit_code) + ")";
    cleanup();
    return out;
  }
  std::stringstream ss;
  ss << isf.rdbuf();

  const int pf = p.num_free();
  std::vector<int> file_sizes = p.block_sizes;
  if (pf) file_sizes.push_back(2 * pf);
  SdpaSolution fsol;
  try {
    fsol = parse_sdpa_solution(ss.str(), p.num_constraints(), file_sizes);
  } catch (const std::exception& e) {
    out.message = std::string("unparseable solver output: ") + e.what();
    cleanup();
    return out;
  }
  cleanup();

  const int nb = static_cast<int>(p.block_sizes.size());
  for (int k = 0; k < nb; ++k) {
    out.X.blocks[k] = fsol.X.blocks[k];
    out.Z.blocks[k] = fsol.Z.blocks[k];
  }
  out.y = -fsol.y;  // the file problem carries -C; see write_sdpa_sparse
  for (int u = 0; u < pf; ++u) {
    const Eigen::MatrixXd& B = fsol.X.blocks[nb];
    out.free_values(u) = B(2 * u, 2 * u) - B(2 * u + 1, 2 * u + 1);
  }
  out.primal_obj = p.objective.dot(out.X) + (pf ? p.free_objective.dot(out.free_values) : 0.0);
  out.dual_obj = p.num_constraints() ? p.rhs.dot(out.y) : 0.0;

  if (exit_code == 1) {
    out.status = SolveStatus::Infeasible;
    out.message = "solver reports primal infeasibility";
    return out;
  }
  if (exit_code == 2) {
    out.status = SolveStatus::Unknown;
    out.message = "solver reports dual infeasibility (primal may be unbounded)";
    return out;
  }
  if (exit_code != 0 && exit_code != 3) {
    out.status = SolveStatus::Unknown;
    out.message = "solver exit code " + std::to_string(exit_code);
    return out;
  }
  KKTReport kkt = kkt_report(p, out);
  double tol = 1e-4 * (1 + std::abs(out.primal_obj));
  if (kkt.primal_residual <= tol && kkt.min_eig_X >= -1e-6 && kkt.min_eig_Z >= -1e-6) {
    out.status = SolveStatus::Feasible;
  } else {
    out.status = SolveStatus::Unknown;
    out.message = "solver output failed the feasibility check";
  }
  return out;
}

}  // namespace sosq
