#pragma once

#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/points.hpp"

namespace cbpp {

// ---------------------------------------------------------------------------
// Multilayered graph: one vertex layer per color over the packing positions,
// plus a single source (0,0). Item arcs cross into the layer of their own
// color and may leave any *other* color's layer; loss arcs close a layer to
// the sink position L without changing color.
// ---------------------------------------------------------------------------

enum class MlArcKind { Source, Item, Loss };

struct MlVertexInfo {
  int point = 0;
  int color = 0;  // 0 only for the source
};

struct MlArc {
  int from = 0;  // vertex ids
  int to = 0;
  MlArcKind kind = MlArcKind::Item;
  int item_id = -1;  // -1 for loss arcs
};

struct MlGraph {
  int capacity = 0;
  int num_colors = 0;
  PackingPoints points;
  std::vector<int> layer_points;  // positions > 0 carrying layered vertices (L included)
  std::vector<MlArc> arcs;
  std::vector<std::vector<int>> out_of;  // vertex id -> arc indices
  std::vector<std::vector<int>> into;

  // Vertex ids: 0 is the source (0,0); vertex (p, q) with p = layer_points[i]
  // sits at 1 + i * num_colors + (q - 1).
  int num_vertices() const {
    return 1 + static_cast<int>(layer_points.size()) * num_colors;
  }

  int layer_index_of(int point) const {
    int idx = points.index_of(point);
    if (point == capacity) return static_cast<int>(layer_points.size()) - 1;
    if (idx <= 0) return -1;  // 0 and non-points carry no layered vertex
    return idx - 1;
  }

  int vertex_id(int point, int color) const {
    if (point == 0 && color == 0) return 0;
    int li = layer_index_of(point);
    if (li < 0 || color < 1 || color > num_colors)
      throw StructuralError("no vertex at (" + std::to_string(point) + "," +
                            std::to_string(color) + ")");
    return 1 + li * num_colors + (color - 1);
  }

  MlVertexInfo vertex(int vid) const {
    if (vid == 0) return {0, 0};
    int li = (vid - 1) / num_colors;
    return {layer_points[static_cast<std::size_t>(li)], (vid - 1) % num_colors + 1};
  }
};

inline MlGraph build_ml_graph(const Instance& inst, const PackingPoints& points) {
  if (points.capacity != inst.capacity)
    throw StructuralError("points were computed for a different capacity");
  MlGraph g;
  g.capacity = inst.capacity;
  g.num_colors = inst.num_colors;
  g.points = points;
  for (int p : points.points)
    if (p > 0 && p < inst.capacity) g.layer_points.push_back(p);
  g.layer_points.push_back(inst.capacity);  // sink position, point or not

  auto push = [&](const MlArc& a) { g.arcs.push_back(a); };

  // source arcs: (0,0) -> (l_u, c_u), one per item whose length is a point or L
  for (const Item& it : inst.items) {
    int j = it.length;
    if (j == inst.capacity || points.contains(j))
      push({0, g.vertex_id(j, it.color), MlArcKind::Source, it.id});
  }
  // item arcs: (i,q) -> (i + l_u, c_u) for interior points i and colors q != c_u
  for (int i : points.points) {
    if (i <= 0 || i >= inst.capacity) continue;
    for (int q = 1; q <= inst.num_colors; ++q)
      for (const Item& it : inst.items) {
        if (it.color == q) continue;
        int j = i + it.length;
        if (j > inst.capacity) continue;
        if (j != inst.capacity && !points.contains(j)) continue;
        push({g.vertex_id(i, q), g.vertex_id(j, it.color), MlArcKind::Item, it.id});
      }
  }
  // loss arcs: (i,q) -> (L,q) for interior points i
  for (int i : points.points) {
    if (i <= 0 || i >= inst.capacity) continue;
    for (int q = 1; q <= inst.num_colors; ++q)
      push({g.vertex_id(i, q), g.vertex_id(inst.capacity, q), MlArcKind::Loss, -1});
  }

  g.out_of.assign(static_cast<std::size_t>(g.num_vertices()), {});
  g.into.assign(static_cast<std::size_t>(g.num_vertices()), {});
  for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
    g.out_of[static_cast<std::size_t>(g.arcs[static_cast<std::size_t>(a)].from)].push_back(a);
    g.into[static_cast<std::size_t>(g.arcs[static_cast<std::size_t>(a)].to)].push_back(a);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Color-alternating graph: plain positions as vertices, arcs carry the color.
// Loss arcs use the reserved color Q+1.
// ---------------------------------------------------------------------------

struct CaArc {
  int from = 0;  // point values, from < to
  int to = 0;
  int color = 0;  // 1..Q item colors, Q+1 loss
  int item_id = -1;
};

struct CaGraph {
  int capacity = 0;
  int num_colors = 0;
  PackingPoints points;
  std::vector<int> vertex_points;  // points, with L appended when absent
  std::vector<CaArc> arcs;
  std::vector<std::vector<int>> out_of;  // vertex index -> arc indices
  std::vector<std::vector<int>> into;
  std::map<std::tuple<int, int, int>, int> arc_lookup;  // (from,to,color) -> arc

  int loss_color() const { return num_colors + 1; }

  int num_vertices() const { return static_cast<int>(vertex_points.size()); }

  int vertex_index(int point) const {
    if (point == capacity) return num_vertices() - 1;
    int idx = points.index_of(point);
    if (idx < 0 || point == capacity) return -1;
    return idx;
  }

  int arc_index(int i, int j, int q) const {
    auto it = arc_lookup.find({i, j, q});
    return it == arc_lookup.end() ? -1 : it->second;
  }
};

inline CaGraph build_ca_graph(const Instance& inst, const PackingPoints& points) {
  if (points.capacity != inst.capacity)
    throw StructuralError("points were computed for a different capacity");
  CaGraph g;
  g.capacity = inst.capacity;
  g.num_colors = inst.num_colors;
  g.points = points;
  for (int p : points.points)
    if (p < inst.capacity) g.vertex_points.push_back(p);
  g.vertex_points.push_back(inst.capacity);

  auto push = [&](int i, int j, int q, int item) {
    g.arc_lookup[{i, j, q}] = static_cast<int>(g.arcs.size());
    g.arcs.push_back({i, j, q, item});
  };

  // item arcs (i, i + l_u, c_u), grouped by origin then color
  for (int i : points.points) {
    if (i >= inst.capacity) continue;
    for (int q = 1; q <= inst.num_colors; ++q)
      for (const Item& it : inst.items) {
        if (it.color != q) continue;
        int j = i + it.length;
        if (j > inst.capacity) continue;
        if (j != inst.capacity && !points.contains(j)) continue;
        push(i, j, q, it.id);
      }
  }
  // loss arcs from interior points to L
  for (int i : points.points)
    if (i > 0 && i < inst.capacity) push(i, inst.capacity, g.loss_color(), -1);

  g.out_of.assign(static_cast<std::size_t>(g.num_vertices()), {});
  g.into.assign(static_cast<std::size_t>(g.num_vertices()), {});
  for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
    g.out_of[static_cast<std::size_t>(g.vertex_index(g.arcs[static_cast<std::size_t>(a)].from))].push_back(a);
    g.into[static_cast<std::size_t>(g.vertex_index(g.arcs[static_cast<std::size_t>(a)].to))].push_back(a);
  }
  return g;
}

// Debug dumps: one arc per line, stable order.
inline std::string dump_graph(const MlGraph& g) {
  std::ostringstream out;
  out << "ml vertices " << g.num_vertices() << " arcs " << g.arcs.size() << "\n";
  for (const MlArc& a : g.arcs) {
    MlVertexInfo f = g.vertex(a.from), t = g.vertex(a.to);
    out << f.point << " " << f.color << " -> " << t.point << " " << t.color << " "
        << (a.kind == MlArcKind::Source ? "source" : a.kind == MlArcKind::Item ? "item" : "loss")
        << " " << a.item_id << "\n";
  }
  return out.str();
}

inline std::string dump_graph(const CaGraph& g) {
  std::ostringstream out;
  out << "ca vertices " << g.num_vertices() << " arcs " << g.arcs.size() << "\n";
  for (const CaArc& a : g.arcs)
    out << a.from << " -> " << a.to << " color " << a.color << " item " << a.item_id << "\n";
  return out.str();
}

}  // namespace cbpp
