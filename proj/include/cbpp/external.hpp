#pragma once

// Driver for external MILP backends speaking the file protocol:
//   <command> <lp-file> <solution-file>
// exit 0  -> solution file holds "objective <v>" plus "name value" lines
// exit 1  -> backend claims the model is infeasible
// other   -> backend failure.
// Returned assignments are never trusted: they are re-verified against the
// model, and an infeasibility claim is rejected whenever the caller supplies
// a verified feasible witness.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#include <unistd.h>
#endif

#include "branch_and_bound.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace cbpp {

struct ExternalOptions {
  std::string workdir;                               // empty -> system temp dir
  std::optional<std::vector<double>> feasible_witness;  // verified feasible point, if any
  double feas_tol = 1e-6;
  double int_tol = 1e-6;
  bool keep_files = false;
};

struct ExternalSolution {
  std::optional<double> objective;
  std::map<std::string, double> values;
};

// "objective <num>" plus "name value" lines; '#' comments and blanks ignored.
inline ExternalSolution parse_external_solution(const std::string& text) {
  ExternalSolution sol;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    double value;
    if (!(ls >> value))
      throw BackendError("solution line " + std::to_string(lineno) + ": missing numeric value");
    std::string extra;
    if (ls >> extra)
      throw BackendError("solution line " + std::to_string(lineno) + ": trailing token '" + extra + "'");
    if (name == "objective") {
      if (sol.objective)
        throw BackendError("solution line " + std::to_string(lineno) + ": duplicate objective");
      sol.objective = value;
    } else {
      if (sol.values.count(name))
        throw BackendError("solution line " + std::to_string(lineno) + ": duplicate variable '" + name + "'");
      sol.values[name] = value;
    }
  }
  return sol;
}

namespace detail {

inline std::string slurp_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline int run_command(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  if (rc == -1) throw BackendError("failed to launch backend command");
#ifdef _WIN32
  return rc;
#else
  if (!WIFEXITED(rc)) throw BackendError("backend terminated abnormally");
  return WEXITSTATUS(rc);
#endif
}

inline std::filesystem::path unique_stem(const std::string& workdir) {
  namespace fs = std::filesystem;
  fs::path dir = workdir.empty() ? fs::temp_directory_path() : fs::path(workdir);
  static unsigned long counter = 0;
  std::ostringstream name;
  name << "cbpp_ext_" << static_cast<unsigned long>(::getpid()) << "_" << counter++;
  return dir / name.str();
}

}  // namespace detail

inline SolveResult external_backend(const MilpModel& model, const std::string& command,
                                    const ExternalOptions& opts = {}) {
  namespace fs = std::filesystem;
  fs::path stem = detail::unique_stem(opts.workdir);
  fs::path lp_path = stem;
  lp_path += ".lp";
  fs::path sol_path = stem;
  sol_path += ".sol";

  {
    std::ofstream out(lp_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + lp_path.string());
    out << emit_lp(model);
  }
  auto cleanup = [&] {
    if (opts.keep_files) return;
    std::error_code ec;
    fs::remove(lp_path, ec);
    fs::remove(sol_path, ec);
  };

  int code;
  try {
    // The command may carry its own words ("cbpp solve-lp"); only the two
    // paths are quoted.
    code = detail::run_command(command + " \"" + lp_path.string() + "\" \"" +
                               sol_path.string() + "\"");
  } catch (...) {
    cleanup();
    throw;
  }

  SolveResult res;
  try {
    if (code == 1) {
      if (opts.feasible_witness) {
        auto why = check_assignment(model, *opts.feasible_witness, opts.feas_tol, opts.int_tol);
        if (!why)
          throw BackendError("backend claims infeasible but a verified feasible witness exists");
      }
      res.status = SolveStatus::Infeasible;
      res.lb = res.ub = kInf;
      cleanup();
      return res;
    }
    if (code != 0)
      throw BackendError("backend exited with code " + std::to_string(code));

    ExternalSolution ext = parse_external_solution(detail::slurp_file(sol_path));
    std::vector<double> x(model.variables.size(), 0.0);
    std::map<std::string, int> by_name;
    for (int i = 0; i < static_cast<int>(model.variables.size()); ++i)
      by_name[model.variables[i].name] = i;
    for (const auto& [name, value] : ext.values) {
      auto it = by_name.find(name);
      if (it == by_name.end())
        throw BackendError("backend reported unknown variable '" + name + "'");
      x[it->second] = value;
    }
    if (auto why = check_assignment(model, x, opts.feas_tol, opts.int_tol))
      throw BackendError("backend solution rejected: " + *why);
    double obj = eval_objective(model, x);
    if (ext.objective) {
      double scale = std::max(1.0, std::abs(*ext.objective));
      if (std::abs(*ext.objective - obj) > 1e-6 * scale)
        throw BackendError("backend objective disagrees with the reported assignment");
    }
    res.status = SolveStatus::Optimal;
    res.incumbent = std::move(x);
    res.lb = res.ub = obj;
  } catch (...) {
    cleanup();
    throw;
  }
  cleanup();
  return res;
}

}  // namespace cbpp
