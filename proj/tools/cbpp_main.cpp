// Command line front end for the toolkit. Exit codes: 0 success,
// 1 infeasibility or a failed verification, 2 usage, 3 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbpp/cbpp.hpp"

namespace fs = std::filesystem;

namespace {

fs::path out_dir_default() {
  const char* env = std::getenv("CBPP_OUT_DIR");
  return fs::path(env && *env ? env : ".");
}

// Default output location: CBPP_OUT_DIR when set, else next to the input.
fs::path derived_path(const std::string& input, const char* ext) {
  fs::path p(input);
  fs::path name = p.stem();
  name += ext;
  const char* env = std::getenv("CBPP_OUT_DIR");
  return (env && *env ? fs::path(env) : p.parent_path()) / name;
}

std::string fmt_bound(double v) {
  if (!(v > -cbpp::kInf && v < cbpp::kInf)) return "--";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct GenerateArgs {
  std::string family;
  bool grid = false;
  std::uint64_t seed = 1;
  std::string out;
  int M = 0, L = 0, Q = 0, replicate = 0;
  double w_lo = 0.0, w_hi = 0.0;
  std::string bpp_file, bpp_solution;
};

int run_generate(const GenerateArgs& a) {
  fs::path dir = a.out.empty() ? out_dir_default() : fs::path(a.out);
  fs::create_directories(dir);

  if (a.family == "bpplib-adapt") {
    if (a.bpp_file.empty() || a.bpp_solution.empty()) {
      std::cerr << "bpplib-adapt needs --bpp and --bpp-solution\n";
      return 2;
    }
    std::ifstream bin(a.bpp_file), sin(a.bpp_solution);
    if (!bin) throw cbpp::IoError("cannot open " + a.bpp_file);
    if (!sin) throw cbpp::IoError("cannot open " + a.bpp_solution);
    cbpp::BppInstance bpp = cbpp::parse_bpp_instance(bin);
    cbpp::AdaptedInstance adapted = cbpp::adapt_bpplib(bpp, cbpp::parse_bpp_bins(sin));
    std::string stem = fs::path(a.bpp_file).stem().string() + "-q2";
    cbpp::write_instance_file((dir / (stem + ".cbpp")).string(), adapted.instance,
                              "bpplib-adapt-" + fs::path(a.bpp_file).stem().string());
    cbpp::write_solution_file((dir / (stem + ".sol")).string(), adapted.solution);
    std::cout << "adapted " << a.bpp_file << ": " << adapted.solution.num_bins()
              << " donor bins, files " << (dir / (stem + ".cbpp")).string() << " and "
              << (dir / (stem + ".sol")).string() << "\n";
    return 0;
  }

  std::vector<cbpp::GeneratorConfig> configs;
  if (a.grid) {
    if (a.family.empty() || a.family == "uniform")
      for (const auto& c : cbpp::uniform_grid(a.seed)) configs.push_back(c);
    if (a.family.empty() || a.family == "zipf")
      for (const auto& c : cbpp::zipf_grid(a.seed)) configs.push_back(c);
  } else {
    if (a.family != "uniform" && a.family != "zipf") {
      std::cerr << "--family {uniform,zipf} is required without --grid\n";
      return 2;
    }
    cbpp::GeneratorConfig cfg{a.family, a.M, a.L, a.Q, a.w_lo, a.w_hi, a.seed, a.replicate};
    if (a.family == "zipf" && cfg.w_lo == 0.0 && cfg.w_hi == 0.0) {
      cfg.w_lo = 0.01;
      cfg.w_hi = 0.25;
    }
    configs.push_back(cfg);
  }
  for (const cbpp::GeneratorConfig& cfg : configs) {
    cbpp::Instance inst = cbpp::generate(cfg);
    cbpp::write_instance_file((dir / (cbpp::instance_name(cfg) + ".cbpp")).string(), inst,
                              cbpp::class_label(cfg));
  }
  std::cout << "wrote " << configs.size() << " instance" << (configs.size() == 1 ? "" : "s")
            << " to " << dir.string() << "\n";
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string model = "ca";
  bool no_normal_patterns = false;
  long long time_limit_ms = 1'800'000;
  long long node_limit = 0;
  std::string backend = "builtin";
  std::string out;
};

int run_solve(const SolveArgs& a) {
  cbpp::ParsedInstance parsed = cbpp::read_instance_file(a.instance);
  cbpp::SolveOptions opts;
  opts.model = a.model;
  opts.normal_patterns = !a.no_normal_patterns;
  opts.time_limit_ms = a.time_limit_ms;
  opts.node_limit = a.node_limit;
  if (a.backend != "builtin") {
    if (a.backend.rfind("external:", 0) != 0) {
      std::cerr << "--backend takes 'builtin' or 'external:<command>'\n";
      return 2;
    }
    opts.backend_command = a.backend.substr(9);
  }
  cbpp::SolveOutcome out = cbpp::solve_instance(parsed.instance, opts);
  std::cout << "status " << cbpp::to_string(out.status) << "\n"
            << "lb " << fmt_bound(out.lb) << "\n"
            << "ub " << fmt_bound(out.ub) << "\n"
            << "gap " << (out.ub < cbpp::kInf && out.ub > 0 ? fmt_bound(out.gap()) : "--") << "\n"
            << "nodes " << out.nodes << "\n"
            << "time_ms " << out.elapsed_ms << "\n";
  if (out.solution) {
    fs::path sol_path = a.out.empty() ? derived_path(a.instance, ".sol") : fs::path(a.out);
    cbpp::write_solution_file(sol_path.string(), *out.solution);
    std::cout << "solution " << sol_path.string() << "\n";
  }
  return out.status == cbpp::SolveStatus::Infeasible ? 1 : 0;
}

struct VerifyArgs {
  std::string instance, solution;
  std::string mode = "ordered";
};

int run_verify(const VerifyArgs& a) {
  cbpp::ParsedInstance parsed = cbpp::read_instance_file(a.instance);
  cbpp::Solution sol = cbpp::read_solution_file(a.solution);
  cbpp::VerifyMode mode =
      a.mode == "existential" ? cbpp::VerifyMode::Existential : cbpp::VerifyMode::AsOrdered;
  cbpp::VerificationReport rep = cbpp::verify_solution(parsed.instance, sol, mode);
  if (rep.valid) {
    std::cout << "valid: " << sol.num_bins() << " bins\n";
    return 0;
  }
  for (const cbpp::Violation& v : rep.violations) {
    std::cout << "violation";
    if (v.bin >= 0) std::cout << " (bin " << v.bin + 1 << ")";
    std::cout << " [" << v.kind << "]: " << v.message << "\n";
  }
  return 1;
}

struct ExportArgs {
  std::string instance;
  std::string model = "ca";
  bool no_normal_patterns = false;
  bool no_bound_z = false;
  std::string out;
};

int run_export(const ExportArgs& a) {
  cbpp::ParsedInstance parsed = cbpp::read_instance_file(a.instance);
  const cbpp::Instance& inst = parsed.instance;
  cbpp::PackingPoints points =
      a.no_normal_patterns ? cbpp::full_points(inst) : cbpp::normal_patterns(inst);
  cbpp::BuildOptions b;
  b.bound_z = !a.no_bound_z;
  cbpp::MilpModel model;
  if (a.model == "ml")
    model = cbpp::build_af_ml(cbpp::build_ml_graph(inst, points), inst, b);
  else
    model = cbpp::build_af_ca(cbpp::build_ca_graph(inst, points), inst, b);
  fs::path lp_path = a.out.empty() ? derived_path(a.instance, ".lp") : fs::path(a.out);
  std::ofstream out(lp_path, std::ios::binary);
  if (!out) throw cbpp::IoError("cannot write " + lp_path.string());
  out << cbpp::emit_lp(model);
  std::cout << "wrote " << lp_path.string() << " (" << model.variables.size() << " variables, "
            << model.constraints.size() << " rows)\n";
  return 0;
}

struct BenchArgs {
  std::string dir;
  std::vector<std::string> models = {"ca", "ml"};
  long long time_limit_ms = 1'800'000;
  int workers = 1;
  bool no_normal_patterns = false;
  std::string out, summary;
};

int run_bench_cmd(const BenchArgs& a) {
  cbpp::BenchConfig cfg;
  cfg.models = a.models;
  cfg.time_limit_ms = a.time_limit_ms;
  cfg.workers = a.workers;
  cfg.normal_patterns = !a.no_normal_patterns;
  cbpp::BenchReport report = cbpp::run_bench(a.dir, cfg);
  fs::path csv = a.out.empty() ? out_dir_default() / "bench.csv" : fs::path(a.out);
  fs::path sum = a.summary.empty() ? csv.parent_path() / (csv.stem().string() + "-summary.csv")
                                   : fs::path(a.summary);
  std::ofstream co(csv, std::ios::binary);
  if (!co) throw cbpp::IoError("cannot write " + csv.string());
  co << report.to_csv();
  std::ofstream so(sum, std::ios::binary);
  if (!so) throw cbpp::IoError("cannot write " + sum.string());
  so << report.summary_csv();
  std::cout << report.rows.size() << " rows -> " << csv.string() << ", summary -> "
            << sum.string() << "\n";
  return 0;
}

struct OracleArgs {
  std::string instance;
  std::string method = "brute";
};

int run_oracle(const OracleArgs& a) {
  cbpp::ParsedInstance parsed = cbpp::read_instance_file(a.instance);
  if (a.method == "setpart") {
    std::cout << "opt " << cbpp::set_partition_opt(parsed.instance) << "\n";
    return 0;
  }
  cbpp::Solution sol = cbpp::brute_force_opt(parsed.instance);
  std::cout << "opt " << sol.num_bins() << "\n" << cbpp::format_solution(sol);
  return 0;
}

// Backend protocol twin: solve a MILP written in our LP subset, write
// "objective" plus the nonzero variables. Exit 0 solved, 1 infeasible.
int run_solve_lp(const std::string& lp_file, const std::string& sol_file,
                 long long time_limit_ms) {
  std::ifstream in(lp_file, std::ios::binary);
  if (!in) throw cbpp::IoError("cannot open " + lp_file);
  std::ostringstream text;
  text << in.rdbuf();
  cbpp::MilpModel model = cbpp::parse_lp(text.str());
  cbpp::BnbConfig cfg;
  cfg.time_limit_ms = time_limit_ms;
  cbpp::SolveResult res = cbpp::solve_bnb(model, cfg);
  if (res.status == cbpp::SolveStatus::Infeasible) return 1;
  if (!res.incumbent) throw cbpp::SolverError("search ended without a solution");
  std::ofstream out(sol_file, std::ios::binary);
  if (!out) throw cbpp::IoError("cannot write " + sol_file);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", res.ub);
  out << "objective " << buf << "\n";
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    double x = (*res.incumbent)[v];
    if (x == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << model.variables[v].name << " " << buf << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solver toolkit for colored bin packing"};
  app.require_subcommand(1);

  GenerateArgs g;
  CLI::App* gen = app.add_subcommand("generate", "generate benchmark instances");
  gen->add_option("--family", g.family, "uniform | zipf | bpplib-adapt")
      ->check(CLI::IsMember({"uniform", "zipf", "bpplib-adapt"}));
  gen->add_flag("--grid", g.grid, "emit the full benchmark grid(s)");
  gen->add_option("--seed", g.seed, "master seed (default 1)");
  gen->add_option("--out", g.out, "output directory (default $CBPP_OUT_DIR or .)");
  gen->add_option("-M", g.M, "item copies");
  gen->add_option("-L", g.L, "bin capacity");
  gen->add_option("-Q", g.Q, "colors (uniform)");
  gen->add_option("--w-lo", g.w_lo, "relative length lower bound");
  gen->add_option("--w-hi", g.w_hi, "relative length upper bound");
  gen->add_option("--replicate", g.replicate, "replicate index (default 0)");
  gen->add_option("--bpp", g.bpp_file, "bin packing instance to adapt");
  gen->add_option("--bpp-solution", g.bpp_solution, "its optimal bins, one per line of lengths");

  SolveArgs s;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance exactly");
  solve->add_option("instance", s.instance, "instance file")->required();
  solve->add_option("--model", s.model, "ca | ml (default ca)")
      ->check(CLI::IsMember({"ca", "ml"}));
  solve->add_flag("--no-normal-patterns", s.no_normal_patterns, "use the full point set");
  solve->add_option("--time-limit-ms", s.time_limit_ms, "search budget (default 1800000)");
  solve->add_option("--node-limit", s.node_limit, "node budget (0 = unlimited)");
  solve->add_option("--backend", s.backend, "builtin | external:<command>");
  solve->add_option("--out", s.out, "solution file (default <instance>.sol)");

  VerifyArgs v;
  CLI::App* verify = app.add_subcommand("verify", "check a packing against an instance");
  verify->add_option("instance", v.instance, "instance file")->required();
  verify->add_option("solution", v.solution, "solution file")->required();
  verify->add_option("--mode", v.mode, "ordered | existential (default ordered)")
      ->check(CLI::IsMember({"ordered", "existential"}));

  ExportArgs e;
  CLI::App* exp = app.add_subcommand("export", "write a formulation as an LP file");
  exp->add_option("instance", e.instance, "instance file")->required();
  exp->add_option("--model", e.model, "ca | ml (default ca)")
      ->check(CLI::IsMember({"ca", "ml"}));
  exp->add_flag("--no-normal-patterns", e.no_normal_patterns, "use the full point set");
  exp->add_flag("--no-bound-z", e.no_bound_z, "leave the bin count unboxed");
  exp->add_option("--out", e.out, "LP file (default <instance>.lp)");

  BenchArgs b;
  CLI::App* bench = app.add_subcommand("bench", "run a directory of instances");
  bench->add_option("dir", b.dir, "directory of .cbpp files")->required();
  bench->add_option("--models", b.models, "formulations to run (default ca,ml)")
      ->delimiter(',');
  bench->add_option("--time-limit-ms", b.time_limit_ms, "per-solve budget (default 1800000)");
  bench->add_option("--workers", b.workers, "parallel workers (default 1)");
  bench->add_flag("--no-normal-patterns", b.no_normal_patterns, "use the full point set");
  bench->add_option("--out", b.out, "report CSV (default $CBPP_OUT_DIR/bench.csv)");
  bench->add_option("--summary", b.summary, "summary CSV (default <out>-summary.csv)");

  OracleArgs o;
  CLI::App* oracle = app.add_subcommand("oracle", "guarded brute-force reference solve");
  oracle->add_option("instance", o.instance, "instance file")->required();
  oracle->add_option("--method", o.method, "brute | setpart (default brute)")
      ->check(CLI::IsMember({"brute", "setpart"}));

  std::string lp_in, lp_out;
  long long lp_budget = 1'800'000;
  CLI::App* slp = app.add_subcommand("solve-lp", "solve an LP-file MILP (backend protocol)");
  slp->add_option("lp", lp_in, "LP file")->required();
  slp->add_option("solution", lp_out, "solution file to write")->required();
  slp->add_option("--time-limit-ms", lp_budget, "search budget (default 1800000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_generate(g);
    if (solve->parsed()) return run_solve(s);
    if (verify->parsed()) return run_verify(v);
    if (exp->parsed()) return run_export(e);
    if (bench->parsed()) return run_bench_cmd(b);
    if (oracle->parsed()) return run_oracle(o);
    if (slp->parsed()) return run_solve_lp(lp_in, lp_out, lp_budget);
  } catch (const cbpp::InfeasibleMultisetError& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return 1;
  } catch (const cbpp::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
  return 2;
}
