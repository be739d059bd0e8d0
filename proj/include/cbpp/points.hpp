#pragma once

#include <vector>

#include "cbpp/instance.hpp"

namespace cbpp {

// The set of usable packing positions in [0, L], ascending, always holding 0.
struct PackingPoints {
  int capacity = 0;
  std::vector<int> points;
  std::vector<int> index;  // point value -> position in `points`, -1 if absent

  bool contains(int p) const {
    return p >= 0 && p <= capacity && index[static_cast<std::size_t>(p)] >= 0;
  }

  int index_of(int p) const {
    return (p >= 0 && p <= capacity) ? index[static_cast<std::size_t>(p)] : -1;
  }

  int count() const { return static_cast<int>(points.size()); }
};

namespace detail {

inline PackingPoints points_from_mask(int capacity, const std::vector<char>& reach) {
  PackingPoints pp;
  pp.capacity = capacity;
  pp.index.assign(static_cast<std::size_t>(capacity) + 1, -1);
  for (int p = 0; p <= capacity; ++p)
    if (reach[static_cast<std::size_t>(p)]) {
      pp.index[static_cast<std::size_t>(p)] = static_cast<int>(pp.points.size());
      pp.points.push_back(p);
    }
  return pp;
}

}  // namespace detail

// Demand-bounded subset sums of the item lengths: every x <= L that equals
// sum_u l_u * pi_u with 0 <= pi_u <= d_u. Computed with the classic
// min-copies-used sweep, O(m * L).
inline PackingPoints normal_patterns(const Instance& inst) {
  const int L = inst.capacity;
  std::vector<char> reach(static_cast<std::size_t>(L) + 1, 0);
  reach[0] = 1;
  std::vector<int> used(static_cast<std::size_t>(L) + 1);
  for (const Item& it : inst.items) {
    // used[j] = fewest copies of `it` needed on top of previously reachable sums
    const int big = it.demand + 1;
    for (int j = 0; j <= L; ++j) used[static_cast<std::size_t>(j)] = reach[static_cast<std::size_t>(j)] ? 0 : big;
    for (int j = it.length; j <= L; ++j) {
      int via = used[static_cast<std::size_t>(j - it.length)] + 1;
      if (via <= it.demand && via < used[static_cast<std::size_t>(j)]) used[static_cast<std::size_t>(j)] = via;
    }
    for (int j = 0; j <= L; ++j)
      if (used[static_cast<std::size_t>(j)] <= it.demand) reach[static_cast<std::size_t>(j)] = 1;
  }
  return detail::points_from_mask(L, reach);
}

// The unreduced position set {0, 1, ..., L}.
inline PackingPoints full_points(const Instance& inst) {
  std::vector<char> reach(static_cast<std::size_t>(inst.capacity) + 1, 1);
  return detail::points_from_mask(inst.capacity, reach);
}

}  // namespace cbpp
