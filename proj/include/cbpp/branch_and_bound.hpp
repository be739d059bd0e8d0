#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/model.hpp"
#include "cbpp/simplex.hpp"

namespace cbpp {

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time-limit";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double lb = -kInf;
  double ub = kInf;
  std::optional<std::vector<double>> incumbent;
  long long nodes = 0;
  long long elapsed_ms = 0;

  double gap() const {
    if (lb == ub) return 0.0;
    return (ub - lb) / ub;
  }
};

struct BnbConfig {
  long long time_limit_ms = 1'800'000;
  long long node_limit = 0;  // 0: unlimited
  std::optional<std::vector<double>> incumbent_hint;  // full assignment, validated
  double int_tol = 1e-6;
  SimplexOptions lp;
};

// Best-first branch and bound over the LP relaxation. Node selection: lowest
// bound, ties broken deeper-first then by creation order. Branching: most
// fractional integer variable, ties by lowest index, split floor/ceil. When
// the objective is a single integer variable (all our packing models), node
// bounds are rounded up before pruning against the incumbent.
inline SolveResult solve_bnb(const MilpModel& model, const BnbConfig& config = {}) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed_ms = [&]() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
  };

  const bool integral_objective =
      model.objective.size() == 1 && model.objective[0].coeff == 1.0 &&
      model.variables[static_cast<std::size_t>(model.objective[0].var)].integer;
  auto sharpen = [&](double v) {
    if (!integral_objective || std::isinf(v)) return v;
    return std::ceil(v - config.int_tol);
  };

  SolveResult res;
  res.lb = -kInf;
  if (integral_objective)
    res.lb = sharpen(model.variables[static_cast<std::size_t>(model.objective[0].var)].lb);

  if (config.incumbent_hint) {
    auto bad = check_assignment(model, *config.incumbent_hint, 1e-6, config.int_tol);
    if (bad) throw Error("incumbent hint rejected: " + *bad);
    res.incumbent = *config.incumbent_hint;
    for (int j = 0; j < model.num_variables(); ++j)
      if (model.variables[static_cast<std::size_t>(j)].integer)
        (*res.incumbent)[static_cast<std::size_t>(j)] =
            std::round((*res.incumbent)[static_cast<std::size_t>(j)]);
    res.ub = eval_objective(model, *res.incumbent);
  }

  struct Node {
    double bound;  // parent LP value (-inf for the root)
    int depth;
    long long id;
    std::vector<double> lb, ub;
    WarmStart warm;  // parent's optimal vertex (empty for the root)
  };
  struct Order {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
      if (a.depth != b.depth) return a.depth < b.depth;  // deeper first
      return a.id > b.id;
    }
  };
  std::priority_queue<Node, std::vector<Node>, Order> open;

  std::vector<double> root_lb, root_ub;
  root_lb.reserve(model.variables.size());
  root_ub.reserve(model.variables.size());
  for (const Variable& v : model.variables) {
    root_lb.push_back(v.lb);
    root_ub.push_back(v.ub);
  }
  long long next_id = 0;
  open.push({-kInf, 0, next_id++, std::move(root_lb), std::move(root_ub)});

  auto finish = [&](SolveStatus st) {
    res.status = st;
    if (res.lb > res.ub) res.lb = res.ub;
    res.elapsed_ms = elapsed_ms();
    return res;
  };

  while (!open.empty()) {
    if (elapsed_ms() >= config.time_limit_ms) {
      res.lb = std::max(res.lb, sharpen(open.top().bound));
      return finish(SolveStatus::TimeLimit);
    }
    if (config.node_limit > 0 && res.nodes >= config.node_limit) {
      res.lb = std::max(res.lb, sharpen(open.top().bound));
      return finish(res.incumbent ? SolveStatus::Feasible : SolveStatus::TimeLimit);
    }

    Node node = open.top();
    open.pop();
    res.lb = std::max(res.lb, sharpen(node.bound));
    if (sharpen(node.bound) >= res.ub) {
      // best-first: every remaining node is at least as bad
      res.lb = res.ub;
      return finish(res.incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible);
    }

    LpSolution lp = solve_lp_bounded(model, node.lb, node.ub, config.lp,
                                     node.warm.empty() ? nullptr : &node.warm);
    ++res.nodes;
    if (lp.status == LpStatus::Infeasible) {
      if (node.depth == 0 && res.incumbent)
        throw SolverError("root relaxation infeasible despite a verified incumbent");
      if (node.depth == 0) {
        res.lb = res.ub = kInf;
        return finish(SolveStatus::Infeasible);
      }
      continue;
    }
    if (lp.status == LpStatus::Unbounded)
      throw SolverError("relaxation is unbounded; packing models should be boxed");

    double node_bound = sharpen(lp.objective);
    if (node.depth == 0) res.lb = std::max(res.lb, node_bound);
    if (node_bound >= res.ub) continue;

    // fractional integer variable closest to half-integrality
    int branch_var = -1;
    double branch_val = 0.0, best_score = kInf;
    for (int j = 0; j < model.num_variables(); ++j) {
      if (!model.variables[static_cast<std::size_t>(j)].integer) continue;
      double v = lp.values[static_cast<std::size_t>(j)];
      double frac = v - std::floor(v);
      if (frac <= config.int_tol || frac >= 1.0 - config.int_tol) continue;
      double score = std::fabs(frac - 0.5);
      if (score < best_score - 1e-12) {
        best_score = score;
        branch_var = j;
        branch_val = v;
      }
    }

    if (branch_var < 0) {
      std::vector<double> cand = lp.values;
      for (int j = 0; j < model.num_variables(); ++j)
        if (model.variables[static_cast<std::size_t>(j)].integer)
          cand[static_cast<std::size_t>(j)] = std::round(cand[static_cast<std::size_t>(j)]);
      auto bad = check_assignment(model, cand, 1e-5, config.int_tol);
      if (bad)
        throw SolverError("integral relaxation point fails verification: " + *bad);
      double val = eval_objective(model, cand);
      if (integral_objective) val = std::round(val);
      if (val < res.ub - 1e-9) {
        res.ub = val;
        res.incumbent = std::move(cand);
      }
      continue;
    }

    Node down{lp.objective, node.depth + 1, next_id++, node.lb, node.ub, lp.warm};
    down.ub[static_cast<std::size_t>(branch_var)] = std::floor(branch_val);
    open.push(std::move(down));
    Node up{lp.objective, node.depth + 1, next_id++, std::move(node.lb), std::move(node.ub),
            std::move(lp.warm)};
    up.lb[static_cast<std::size_t>(branch_var)] = std::ceil(branch_val);
    open.push(std::move(up));
  }

  if (!res.incumbent) {
    res.lb = res.ub = kInf;
    return finish(SolveStatus::Infeasible);
  }
  res.lb = res.ub;
  return finish(SolveStatus::Optimal);
}

}  // namespace cbpp
