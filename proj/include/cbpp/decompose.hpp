#pragma once

// Path decomposition of color-alternating flows and the flow maps between
// the two formulations. The walk repeatedly extracts a source-to-sink path
// along positive arcs, never entering an arc whose traversal would strand
// flow at the current position: after arriving with color a, leaving with
// color b is blocked whenever some third color q has its alternation row
// tight (in(q) = out(!=q)), since leaving would spend out-capacity reserved
// for q. The extracted multiplicity is capped by the alternation slack of
// every traversed position, which keeps the residual feasible for fractional
// flows and leaves integral residuals integral.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/formulations.hpp"
#include "cbpp/graphs.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/model.hpp"
#include "cbpp/solution.hpp"

namespace cbpp {

// Arc flows indexed like the graph's arc list, plus the bin count z.
struct FlowAssignment {
  std::vector<double> arc_flow;
  double z = 0.0;
};

inline FlowAssignment extract_flow(const MilpModel& model, const std::vector<double>& x) {
  if (model.z_index < 0 || model.z_index >= static_cast<int>(x.size()))
    throw DecompositionError("model has no bin-count variable");
  FlowAssignment f;
  f.z = x[static_cast<std::size_t>(model.z_index)];
  f.arc_flow.reserve(model.arc_vars.size());
  for (int v : model.arc_vars) {
    if (v < 0 || v >= static_cast<int>(x.size()))
      throw DecompositionError("arc variable index out of range");
    f.arc_flow.push_back(x[static_cast<std::size_t>(v)]);
  }
  return f;
}

inline std::vector<double> flow_to_assignment(const MilpModel& model, const FlowAssignment& f) {
  if (f.arc_flow.size() != model.arc_vars.size())
    throw DecompositionError("flow does not match the model's arc list");
  std::vector<double> x(model.variables.size(), 0.0);
  for (std::size_t a = 0; a < f.arc_flow.size(); ++a)
    x[static_cast<std::size_t>(model.arc_vars[a])] = f.arc_flow[a];
  x[static_cast<std::size_t>(model.z_index)] = f.z;
  return x;
}

// Structural rows of a flow on the color-alternating graph: nonnegativity,
// conservation, and the alternation rows. These stay valid for residual flows
// mid-decomposition; demand coverage (check_ca_flow) does not.
inline std::optional<std::string> check_ca_flow_structure(const CaGraph& g,
                                                          const FlowAssignment& f,
                                                          double tol = 1e-7) {
  if (f.arc_flow.size() != g.arcs.size()) return "flow vector does not match the arc list";
  double s = std::max(1.0, std::abs(f.z)) * tol;
  if (f.z < -s) return "negative bin count";
  for (std::size_t a = 0; a < f.arc_flow.size(); ++a)
    if (f.arc_flow[a] < -s)
      return "negative flow on arc (" + std::to_string(g.arcs[a].from) + "," +
             std::to_string(g.arcs[a].to) + "," + std::to_string(g.arcs[a].color) + ")";

  for (int vi = 0; vi < g.num_vertices(); ++vi) {
    int p = g.vertex_points[static_cast<std::size_t>(vi)];
    double net = 0.0;
    for (int a : g.into[static_cast<std::size_t>(vi)]) net += f.arc_flow[static_cast<std::size_t>(a)];
    for (int a : g.out_of[static_cast<std::size_t>(vi)]) net -= f.arc_flow[static_cast<std::size_t>(a)];
    if (p == 0) net += f.z;
    if (p == g.capacity) net -= f.z;
    if (std::abs(net) > s) return "flow_" + std::to_string(p) + " violated by " + std::to_string(net);
    if (p <= 0 || p >= g.capacity) continue;
    for (int q = 1; q <= g.num_colors; ++q) {
      double row = 0.0;
      for (int a : g.into[static_cast<std::size_t>(vi)])
        if (g.arcs[static_cast<std::size_t>(a)].color == q) row += f.arc_flow[static_cast<std::size_t>(a)];
      for (int a : g.out_of[static_cast<std::size_t>(vi)])
        if (g.arcs[static_cast<std::size_t>(a)].color != q) row -= f.arc_flow[static_cast<std::size_t>(a)];
      if (row > s)
        return "color_" + std::to_string(p) + "_" + std::to_string(q) + " violated by " + std::to_string(row);
    }
  }
  return std::nullopt;
}

// Row-by-row feasibility of a flow on the color-alternating graph; returns
// the first violated row's description, or nothing.
inline std::optional<std::string> check_ca_flow(const CaGraph& g, const Instance& inst,
                                                const FlowAssignment& f, double tol = 1e-7) {
  if (auto why = check_ca_flow_structure(g, f, tol)) return why;
  double s = std::max(1.0, std::abs(f.z)) * tol;
  for (const Item& it : inst.items) {
    double got = 0.0;
    for (std::size_t a = 0; a < g.arcs.size(); ++a)
      if (g.arcs[a].item_id == it.id) got += f.arc_flow[a];
    if (std::abs(got - it.demand) > s)
      return "dem_" + std::to_string(it.id) + ": carries " + std::to_string(got) + " of " +
             std::to_string(it.demand);
  }
  return std::nullopt;
}

struct WeightedPath {
  double multiplicity = 0.0;
  std::vector<int> arcs;  // indices into the graph's arc list, source to sink
};

struct DecomposeOptions {
  double tol = 1e-9;       // positivity / slack threshold on residual flow
  double feas_tol = 1e-7;  // up-front feasibility check of the input flow
  bool check_each_step = false;
  long long max_iterations = 0;  // 0: automatic
};

inline std::vector<WeightedPath> decompose_af(const CaGraph& g, const Instance& inst,
                                              const FlowAssignment& flow,
                                              const DecomposeOptions& opts = {}) {
  if (auto why = check_ca_flow(g, inst, flow, opts.feas_tol))
    throw DecompositionError("flow rejected: " + *why);

  std::vector<double> res = flow.arc_flow;
  for (double& v : res)
    if (v <= opts.tol) v = 0.0;
  double z_res = flow.z;

  auto in_sum = [&](int vi, int q) {
    double sum = 0.0;
    for (int a : g.into[static_cast<std::size_t>(vi)])
      if (g.arcs[static_cast<std::size_t>(a)].color == q) sum += res[static_cast<std::size_t>(a)];
    return sum;
  };
  auto out_ne_sum = [&](int vi, int q) {
    double sum = 0.0;
    for (int a : g.out_of[static_cast<std::size_t>(vi)])
      if (g.arcs[static_cast<std::size_t>(a)].color != q) sum += res[static_cast<std::size_t>(a)];
    return sum;
  };

  long long max_iter = opts.max_iterations > 0
                           ? opts.max_iterations
                           : 4LL * (static_cast<long long>(g.arcs.size()) +
                                    static_cast<long long>(g.num_vertices()) * (g.num_colors + 2)) +
                                 16;
  int source_vi = g.vertex_index(0);
  std::vector<WeightedPath> paths;

  while (true) {
    int start = -1;
    for (int a : g.out_of[static_cast<std::size_t>(source_vi)]) {
      if (res[static_cast<std::size_t>(a)] <= 0.0) continue;
      if (start < 0 ||
          std::make_pair(g.arcs[static_cast<std::size_t>(a)].to, g.arcs[static_cast<std::size_t>(a)].color) <
              std::make_pair(g.arcs[static_cast<std::size_t>(start)].to, g.arcs[static_cast<std::size_t>(start)].color))
        start = a;
    }
    if (start < 0) break;
    if (static_cast<long long>(paths.size()) >= max_iter)
      throw DecompositionError("decomposition failed to terminate");

    WeightedPath path;
    path.arcs.push_back(start);
    double w = res[static_cast<std::size_t>(start)];
    int p = g.arcs[static_cast<std::size_t>(start)].to;
    int prev = g.arcs[static_cast<std::size_t>(start)].color;

    while (p != g.capacity) {
      int vi = g.vertex_index(p);
      int chosen = -1;
      for (int a : g.out_of[static_cast<std::size_t>(vi)]) {
        if (res[static_cast<std::size_t>(a)] <= 0.0) continue;
        const CaArc& arc = g.arcs[static_cast<std::size_t>(a)];
        if (arc.color == prev) continue;
        bool blocked = false;
        for (int q = 1; q <= g.num_colors && !blocked; ++q) {
          if (q == prev || q == arc.color) continue;
          if (out_ne_sum(vi, q) - in_sum(vi, q) <= opts.tol) blocked = true;
        }
        if (blocked) continue;
        if (chosen < 0 ||
            std::make_pair(arc.to, arc.color) <
                std::make_pair(g.arcs[static_cast<std::size_t>(chosen)].to,
                               g.arcs[static_cast<std::size_t>(chosen)].color))
          chosen = a;
      }
      if (chosen < 0)
        throw DecompositionError("no unblocked arc out of position " + std::to_string(p) +
                                 " after color " + std::to_string(prev));
      // The extraction must not exceed any third color's alternation slack here.
      for (int q = 1; q <= g.num_colors; ++q) {
        if (q == prev || q == g.arcs[static_cast<std::size_t>(chosen)].color) continue;
        w = std::min(w, out_ne_sum(vi, q) - in_sum(vi, q));
      }
      w = std::min(w, res[static_cast<std::size_t>(chosen)]);
      path.arcs.push_back(chosen);
      p = g.arcs[static_cast<std::size_t>(chosen)].to;
      prev = g.arcs[static_cast<std::size_t>(chosen)].color;
    }

    for (int a : path.arcs) {
      res[static_cast<std::size_t>(a)] -= w;
      if (res[static_cast<std::size_t>(a)] <= opts.tol) res[static_cast<std::size_t>(a)] = 0.0;
    }
    z_res -= w;
    path.multiplicity = w;
    paths.push_back(std::move(path));

    if (opts.check_each_step) {
      FlowAssignment rest{res, std::max(z_res, 0.0)};
      if (auto why = check_ca_flow_structure(g, rest, std::max(opts.feas_tol, 1e-6)))
        throw DecompositionError("residual infeasible after " + std::to_string(paths.size()) +
                                 " paths: " + *why);
    }
  }
  return paths;
}

// Turns integral-multiplicity paths into bins; loss arcs contribute nothing.
inline Solution paths_to_solution(const CaGraph& g, const Instance& inst,
                                  const std::vector<WeightedPath>& paths,
                                  double int_tol = 1e-6) {
  Solution sol;
  for (const WeightedPath& wp : paths) {
    double r = std::round(wp.multiplicity);
    if (std::abs(wp.multiplicity - r) > int_tol)
      throw DecompositionError("path multiplicity " + std::to_string(wp.multiplicity) +
                               " is not integral");
    long long copies = static_cast<long long>(r);
    if (copies == 0) continue;
    PackingPattern pat;
    for (int a : wp.arcs)
      if (g.arcs[static_cast<std::size_t>(a)].item_id > 0)
        pat.items.push_back(g.arcs[static_cast<std::size_t>(a)].item_id);
    if (!pat.alternation_ok(inst))
      throw DecompositionError("extracted path repeats a color");
    for (long long k = 0; k < copies; ++k) sol.bins.push_back(pat);
  }
  return sol;
}

// Projects a multilayered flow onto the color-alternating graph by summing
// over origin layers; objective value carries over unchanged.
inline FlowAssignment map_ml_to_ca(const MlGraph& mg, const CaGraph& cg, const Instance& inst,
                                   const FlowAssignment& ml) {
  detail::check_graph_instance(mg.capacity, mg.num_colors, inst);
  detail::check_graph_instance(cg.capacity, cg.num_colors, inst);
  if (ml.arc_flow.size() != mg.arcs.size())
    throw DecompositionError("flow vector does not match the arc list");
  FlowAssignment ca;
  ca.z = ml.z;
  ca.arc_flow.assign(cg.arcs.size(), 0.0);
  for (std::size_t a = 0; a < mg.arcs.size(); ++a) {
    const MlArc& arc = mg.arcs[a];
    MlVertexInfo f = mg.vertex(arc.from), t = mg.vertex(arc.to);
    int idx;
    if (arc.kind == MlArcKind::Loss)
      idx = cg.arc_index(f.point, cg.capacity, cg.loss_color());
    else
      idx = cg.arc_index(f.point, t.point, t.color);
    if (idx < 0)
      throw StructuralError("no matching arc for (" + std::to_string(f.point) + "," +
                            std::to_string(t.point) + ")");
    ca.arc_flow[static_cast<std::size_t>(idx)] += ml.arc_flow[a];
  }
  return ca;
}

namespace detail {

// Both graphs pin an item to (origin point, landing point), so arc lookup by
// endpoint pair is unambiguous.
inline std::map<std::pair<int, int>, int> ml_arcs_by_vertices(const MlGraph& g) {
  std::map<std::pair<int, int>, int> idx;
  for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a)
    idx[{g.arcs[static_cast<std::size_t>(a)].from, g.arcs[static_cast<std::size_t>(a)].to}] = a;
  return idx;
}

}  // namespace detail

// Lifts a color-alternating flow to the multilayered graph: decompose into
// alternating paths, then replay each path remembering the previous color,
// which names the origin layer of every arc.
inline FlowAssignment map_ca_to_ml(const CaGraph& cg, const MlGraph& mg, const Instance& inst,
                                   const FlowAssignment& ca, const DecomposeOptions& opts = {}) {
  detail::check_graph_instance(mg.capacity, mg.num_colors, inst);
  detail::check_graph_instance(cg.capacity, cg.num_colors, inst);
  std::vector<WeightedPath> paths = decompose_af(cg, inst, ca, opts);
  auto by_vertices = detail::ml_arcs_by_vertices(mg);
  auto ml_arc = [&](int from_vid, int to_vid) {
    auto it = by_vertices.find({from_vid, to_vid});
    if (it == by_vertices.end())
      throw StructuralError("multilayered graph is missing a replayed arc");
    return it->second;
  };

  FlowAssignment ml;
  ml.z = ca.z;
  ml.arc_flow.assign(mg.arcs.size(), 0.0);
  for (const WeightedPath& wp : paths) {
    int prev = 0;  // source layer
    int at = 0;
    for (int a : wp.arcs) {
      const CaArc& arc = cg.arcs[static_cast<std::size_t>(a)];
      int from_vid = mg.vertex_id(at, prev);
      int to_vid, next_color;
      if (arc.color == cg.loss_color()) {
        to_vid = mg.vertex_id(mg.capacity, prev);  // loss stays in its layer
        next_color = prev;
      } else {
        to_vid = mg.vertex_id(arc.to, arc.color);
        next_color = arc.color;
      }
      ml.arc_flow[static_cast<std::size_t>(ml_arc(from_vid, to_vid))] += wp.multiplicity;
      at = arc.to;
      prev = next_color;
    }
  }
  return ml;
}

// Warm-start constructions: replay a verified packing as unit path flows.
inline FlowAssignment solution_to_ca_flow(const CaGraph& g, const Instance& inst,
                                          const Solution& sol) {
  detail::check_graph_instance(g.capacity, g.num_colors, inst);
  FlowAssignment f;
  f.z = static_cast<double>(sol.num_bins());
  f.arc_flow.assign(g.arcs.size(), 0.0);
  for (const PackingPattern& pat : sol.bins) {
    int at = 0;
    for (int id : pat.items) {
      const Item& it = inst.item(id);
      int idx = g.arc_index(at, at + it.length, it.color);
      if (idx < 0)
        throw StructuralError("pattern position " + std::to_string(at) +
                              " is not a point of the graph");
      f.arc_flow[static_cast<std::size_t>(idx)] += 1.0;
      at += it.length;
    }
    if (at < g.capacity) {
      int idx = g.arc_index(at, g.capacity, g.loss_color());
      if (idx < 0)
        throw StructuralError("no loss arc from position " + std::to_string(at));
      f.arc_flow[static_cast<std::size_t>(idx)] += 1.0;
    }
  }
  return f;
}

inline FlowAssignment solution_to_ml_flow(const MlGraph& g, const Instance& inst,
                                          const Solution& sol) {
  detail::check_graph_instance(g.capacity, g.num_colors, inst);
  auto by_vertices = detail::ml_arcs_by_vertices(g);
  FlowAssignment f;
  f.z = static_cast<double>(sol.num_bins());
  f.arc_flow.assign(g.arcs.size(), 0.0);
  auto add = [&](int from_vid, int to_vid) {
    auto it = by_vertices.find({from_vid, to_vid});
    if (it == by_vertices.end())
      throw StructuralError("pattern does not embed in the multilayered graph");
    f.arc_flow[static_cast<std::size_t>(it->second)] += 1.0;
  };
  for (const PackingPattern& pat : sol.bins) {
    int at = 0, prev = 0;
    for (int id : pat.items) {
      const Item& it = inst.item(id);
      add(g.vertex_id(at, prev), g.vertex_id(at + it.length, it.color));
      at += it.length;
      prev = it.color;
    }
    if (at < g.capacity) add(g.vertex_id(at, prev), g.vertex_id(g.capacity, prev));
  }
  return f;
}

}  // namespace cbpp
