#pragma once

#include <string>
#include <vector>

#include "cbpp/bounds.hpp"
#include "cbpp/errors.hpp"
#include "cbpp/graphs.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/model.hpp"

namespace cbpp {

struct BuildOptions {
  // When set, z is boxed to [lower_bound, |ff_heuristic|]; otherwise to the
  // non-binding [0, total copies]. Disable to study the bare relaxation.
  bool bound_z = true;
};

namespace detail {

struct ZBounds {
  double lb, ub;
};

inline ZBounds z_bounds(const Instance& inst, const BuildOptions& opts) {
  if (opts.bound_z)
    return {static_cast<double>(lower_bound(inst)),
            static_cast<double>(ff_heuristic(inst).num_bins())};
  return {0.0, static_cast<double>(inst.total_copies())};
}

inline void check_graph_instance(int g_capacity, int g_colors, const Instance& inst) {
  if (g_capacity != inst.capacity)
    throw StructuralError("graph capacity " + std::to_string(g_capacity) +
                          " does not match instance capacity " + std::to_string(inst.capacity));
  if (g_colors != inst.num_colors)
    throw StructuralError("graph has " + std::to_string(g_colors) + " colors, instance has " +
                          std::to_string(inst.num_colors));
}

}  // namespace detail

// Color-alternating formulation: per-position flow conservation, one
// alternation row per interior position and color, one equality-demand row
// per item. Loss arcs carry the reserved color Q+1 and never enter the
// alternation rows' incoming side.
inline MilpModel build_af_ca(const CaGraph& g, const Instance& inst,
                             const BuildOptions& opts = {}) {
  detail::check_graph_instance(g.capacity, g.num_colors, inst);
  for (const CaArc& a : g.arcs)
    if (a.color <= g.num_colors &&
        (!inst.has_item(a.item_id) || inst.item(a.item_id).length != a.to - a.from ||
         inst.item(a.item_id).color != a.color))
      throw StructuralError("arc (" + std::to_string(a.from) + "," + std::to_string(a.to) +
                            "," + std::to_string(a.color) + ") does not match any item");

  detail::ZBounds zb = detail::z_bounds(inst, opts);
  MilpModel model;
  model.arc_vars.reserve(g.arcs.size());
  for (const CaArc& a : g.arcs) {
    double ub = a.item_id > 0 ? static_cast<double>(inst.item(a.item_id).demand) : zb.ub;
    std::string name = "x_" + std::to_string(a.from) + "_" + std::to_string(a.to) + "_" +
                       std::to_string(a.color);
    model.arc_vars.push_back(model.add_variable(name, 0.0, ub, true));
  }
  model.z_index = model.add_variable("z", zb.lb, zb.ub, true);
  model.objective = {{model.z_index, 1.0}};

  for (int vi = 0; vi < g.num_vertices(); ++vi) {
    int p = g.vertex_points[static_cast<std::size_t>(vi)];
    Constraint c;
    c.name = "flow_" + std::to_string(p);
    c.rel = Relation::Eq;
    c.rhs = 0.0;
    for (int a : g.into[static_cast<std::size_t>(vi)])
      c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], 1.0});
    for (int a : g.out_of[static_cast<std::size_t>(vi)])
      c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], -1.0});
    if (p == 0)
      c.terms.push_back({model.z_index, 1.0});  // in - out = -z
    else if (p == g.capacity)
      c.terms.push_back({model.z_index, -1.0});  // in - out = z
    model.constraints.push_back(std::move(c));
  }

  for (int vi = 0; vi < g.num_vertices(); ++vi) {
    int p = g.vertex_points[static_cast<std::size_t>(vi)];
    if (p <= 0 || p >= g.capacity) continue;
    for (int q = 1; q <= g.num_colors; ++q) {
      Constraint c;
      c.name = "color_" + std::to_string(p) + "_" + std::to_string(q);
      c.rel = Relation::Le;
      c.rhs = 0.0;
      for (int a : g.into[static_cast<std::size_t>(vi)])
        if (g.arcs[static_cast<std::size_t>(a)].color == q)
          c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], 1.0});
      for (int a : g.out_of[static_cast<std::size_t>(vi)])
        if (g.arcs[static_cast<std::size_t>(a)].color != q)
          c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], -1.0});
      model.constraints.push_back(std::move(c));
    }
  }

  for (const Item& it : inst.items) {
    Constraint c;
    c.name = "dem_" + std::to_string(it.id);
    c.rel = Relation::Eq;
    c.rhs = static_cast<double>(it.demand);
    for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a)
      if (g.arcs[static_cast<std::size_t>(a)].item_id == it.id)
        c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], 1.0});
    model.constraints.push_back(std::move(c));
  }
  return model;
}

// Multilayered formulation: per-vertex flow conservation with -z at the
// source; the Q sinks (L,q) jointly absorb z through one aggregated row
// (their per-vertex "in = z each" reading is unsatisfiable for Q >= 2);
// equality-demand rows sum each item's arcs over all origin colors q' != c_u,
// source arcs included.
inline MilpModel build_af_ml(const MlGraph& g, const Instance& inst,
                             const BuildOptions& opts = {}) {
  detail::check_graph_instance(g.capacity, g.num_colors, inst);
  for (const MlArc& a : g.arcs)
    if (a.kind != MlArcKind::Loss && !inst.has_item(a.item_id))
      throw StructuralError("arc references unknown item " + std::to_string(a.item_id));

  detail::ZBounds zb = detail::z_bounds(inst, opts);
  MilpModel model;
  model.arc_vars.reserve(g.arcs.size());
  for (const MlArc& a : g.arcs) {
    MlVertexInfo f = g.vertex(a.from), t = g.vertex(a.to);
    double ub = a.kind == MlArcKind::Loss ? zb.ub
                                          : static_cast<double>(inst.item(a.item_id).demand);
    std::string name = "x_" + std::to_string(f.point) + "_" + std::to_string(f.color) + "_" +
                       std::to_string(t.point) + "_" + std::to_string(t.color);
    model.arc_vars.push_back(model.add_variable(name, 0.0, ub, true));
  }
  model.z_index = model.add_variable("z", zb.lb, zb.ub, true);
  model.objective = {{model.z_index, 1.0}};

  auto flow_row = [&](int vid, const std::string& name, double z_coeff) {
    Constraint c;
    c.name = name;
    c.rel = Relation::Eq;
    c.rhs = 0.0;
    for (int a : g.into[static_cast<std::size_t>(vid)])
      c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], 1.0});
    for (int a : g.out_of[static_cast<std::size_t>(vid)])
      c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], -1.0});
    if (z_coeff != 0.0) c.terms.push_back({model.z_index, z_coeff});
    model.constraints.push_back(std::move(c));
  };

  flow_row(0, "flow_0_0", 1.0);  // in - out = -z
  for (int vid = 1; vid < g.num_vertices(); ++vid) {
    MlVertexInfo v = g.vertex(vid);
    if (v.point == g.capacity) continue;  // handled by the aggregated sink row
    flow_row(vid, "flow_" + std::to_string(v.point) + "_" + std::to_string(v.color), 0.0);
  }
  {
    Constraint c;  // sinks: sum_q in(L,q) = z
    c.name = "flow_" + std::to_string(g.capacity);
    c.rel = Relation::Eq;
    c.rhs = 0.0;
    for (int q = 1; q <= g.num_colors; ++q) {
      int vid = g.vertex_id(g.capacity, q);
      for (int a : g.into[static_cast<std::size_t>(vid)])
        c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], 1.0});
    }
    c.terms.push_back({model.z_index, -1.0});
    model.constraints.push_back(std::move(c));
  }

  for (const Item& it : inst.items) {
    Constraint c;
    c.name = "dem_" + std::to_string(it.id);
    c.rel = Relation::Eq;
    c.rhs = static_cast<double>(it.demand);
    for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a)
      if (g.arcs[static_cast<std::size_t>(a)].item_id == it.id)
        c.terms.push_back({model.arc_vars[static_cast<std::size_t>(a)], 1.0});
    model.constraints.push_back(std::move(c));
  }
  return model;
}

}  // namespace cbpp
