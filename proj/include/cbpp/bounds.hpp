#pragma once

#include <algorithm>
#include <vector>

#include "cbpp/instance.hpp"
#include "cbpp/multiset.hpp"
#include "cbpp/solution.hpp"

namespace cbpp {

// Combinatorial lower bound on the number of bins: the size bound
// ceil(sum l_u d_u / L), the color bound max_q delta_q over the full item
// multiset (each bin absorbs at most one unit of discrepancy), and 1 when any
// demand is positive.
inline long long lower_bound(const Instance& inst) {
  const long long total_len = inst.total_length();
  long long lb = (total_len + inst.capacity - 1) / inst.capacity;
  std::vector<long long> by_color(static_cast<std::size_t>(inst.num_colors) + 1, 0);
  for (const Item& it : inst.items) by_color[static_cast<std::size_t>(it.color)] += it.demand;
  const long long total = inst.total_copies();
  for (int q = 1; q <= inst.num_colors; ++q)
    lb = std::max(lb, 2 * by_color[static_cast<std::size_t>(q)] - total);
  if (total > 0) lb = std::max(lb, 1LL);
  return std::max(lb, 0LL);
}

// First-fit over item copies sorted by non-increasing length (ties: smaller
// color, then smaller id). A copy goes to the first open bin that keeps both
// the capacity and the discrepancy condition (delta <= 1), else opens a new
// bin. Bin contents are sequenced by alternate() at the end, so the result
// verifies in both modes.
inline Solution ff_heuristic(const Instance& inst) {
  struct Copy {
    int id;
    int length;
    int color;
  };
  std::vector<Copy> copies;
  copies.reserve(static_cast<std::size_t>(inst.total_copies()));
  for (const Item& it : inst.items)
    for (int k = 0; k < it.demand; ++k) copies.push_back({it.id, it.length, it.color});
  std::stable_sort(copies.begin(), copies.end(), [](const Copy& a, const Copy& b) {
    if (a.length != b.length) return a.length > b.length;
    if (a.color != b.color) return a.color < b.color;
    return a.id < b.id;
  });

  struct Bin {
    ItemMultiset ms;
    long long used = 0;
    std::vector<long long> per_color;  // copies per color, 1..Q
    long long total = 0;
  };
  std::vector<Bin> bins;
  for (const Copy& cp : copies) {
    bool placed = false;
    for (Bin& bin : bins) {
      if (bin.used + cp.length > inst.capacity) continue;
      // discrepancy after insertion: counts change only for cp.color
      long long n = bin.total + 1;
      long long delta = 2 * (bin.per_color[static_cast<std::size_t>(cp.color)] + 1) - n;
      for (int q = 1; q <= inst.num_colors; ++q)
        if (q != cp.color)
          delta = std::max(delta, 2 * bin.per_color[static_cast<std::size_t>(q)] - n);
      if (delta > 1) continue;
      bin.ms.add(cp.id);
      bin.used += cp.length;
      bin.per_color[static_cast<std::size_t>(cp.color)] += 1;
      bin.total += 1;
      placed = true;
      break;
    }
    if (!placed) {
      Bin bin;
      bin.per_color.assign(static_cast<std::size_t>(inst.num_colors) + 1, 0);
      bin.ms.add(cp.id);
      bin.used = cp.length;
      bin.per_color[static_cast<std::size_t>(cp.color)] = 1;
      bin.total = 1;
      bins.push_back(std::move(bin));
    }
  }

  Solution sol;
  sol.bins.reserve(bins.size());
  for (const Bin& bin : bins) sol.bins.push_back(alternate(bin.ms, inst));
  return sol;
}

}  // namespace cbpp
