#pragma once

// End-to-end solving: points -> graph -> model -> (warm-started) search ->
// flow decomposition -> verified packing. The first-fit packing seeds the
// search as an incumbent flow, so whenever a finite upper bound is reported a
// verified packing backs it.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cbpp/bounds.hpp"
#include "cbpp/branch_and_bound.hpp"
#include "cbpp/decompose.hpp"
#include "cbpp/errors.hpp"
#include "cbpp/external.hpp"
#include "cbpp/formulations.hpp"
#include "cbpp/graphs.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/points.hpp"
#include "cbpp/solution.hpp"

namespace cbpp {

struct SolveOptions {
  std::string model = "ca";      // "ca" | "ml"
  bool normal_patterns = true;   // false: full point set
  long long time_limit_ms = 1'800'000;
  long long node_limit = 0;      // 0: unlimited
  std::string backend_command;   // empty: builtin branch and bound
  bool warm_start = true;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  double lb = -kInf;
  double ub = kInf;
  long long nodes = 0;
  long long elapsed_ms = 0;
  std::optional<Solution> solution;

  double gap() const { return lb == ub ? 0.0 : (ub - lb) / ub; }
};

inline SolveOutcome solve_instance(const Instance& inst, const SolveOptions& opts = {}) {
  validate_instance(inst);
  if (opts.model != "ca" && opts.model != "ml")
    throw Error("unknown model '" + opts.model + "'");

  PackingPoints points = opts.normal_patterns ? normal_patterns(inst) : full_points(inst);
  CaGraph ca = build_ca_graph(inst, points);
  MlGraph ml;
  const bool use_ml = opts.model == "ml";
  if (use_ml) ml = build_ml_graph(inst, points);

  MilpModel model = use_ml ? build_af_ml(ml, inst) : build_af_ca(ca, inst);

  std::optional<std::vector<double>> hint;
  if (opts.warm_start) {
    Solution ff = ff_heuristic(inst);
    FlowAssignment flow =
        use_ml ? solution_to_ml_flow(ml, inst, ff) : solution_to_ca_flow(ca, inst, ff);
    hint = flow_to_assignment(model, flow);
  }

  SolveResult res;
  if (opts.backend_command.empty()) {
    BnbConfig cfg;
    cfg.time_limit_ms = opts.time_limit_ms;
    cfg.node_limit = opts.node_limit;
    cfg.incumbent_hint = hint;
    res = solve_bnb(model, cfg);
  } else {
    auto t0 = std::chrono::steady_clock::now();
    ExternalOptions ext;
    ext.feasible_witness = hint;
    res = external_backend(model, opts.backend_command, ext);
    res.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  }

  SolveOutcome out;
  out.status = res.status;
  out.lb = res.lb;
  out.ub = res.ub;
  out.nodes = res.nodes;
  out.elapsed_ms = res.elapsed_ms;
  if (res.incumbent) {
    FlowAssignment flow = extract_flow(model, *res.incumbent);
    FlowAssignment ca_flow = use_ml ? map_ml_to_ca(ml, ca, inst, flow) : flow;
    Solution sol = paths_to_solution(ca, inst, decompose_af(ca, inst, ca_flow));
    VerificationReport rep = verify_solution(inst, sol, VerifyMode::AsOrdered);
    if (!rep.valid)
      throw SolverError("internal: decomposed packing failed verification: " +
                        rep.violations.front().message);
    out.solution = std::move(sol);
  }
  return out;
}

}  // namespace cbpp
