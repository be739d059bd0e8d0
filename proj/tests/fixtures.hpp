#pragma once

// Shared test fixtures and small test-side reference implementations, kept
// deliberately independent from the library's algorithms.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cbpp/cbpp.hpp"

namespace fixtures {

// The running example: capacity 8, three colors, items
// (length, demand, color) = (4,2,1), (3,1,2), (3,1,3), (2,1,3).
inline cbpp::Instance example() {
  cbpp::Instance inst;
  inst.capacity = 8;
  inst.num_colors = 3;
  inst.items = {{1, 4, 2, 1}, {2, 3, 1, 2}, {3, 3, 1, 3}, {4, 2, 1, 3}};
  return inst;
}

inline std::string example_text() {
  return "4 8 3\n4 2 1\n3 1 2\n3 1 3\n2 1 3\n";
}

// Demand-bounded subset sums by plain set expansion, one item at a time.
inline std::set<int> subset_sums(const cbpp::Instance& inst) {
  std::set<int> sums{0};
  for (const cbpp::Item& it : inst.items) {
    std::set<int> grown = sums;
    for (int s : sums)
      for (int k = 1; k <= it.demand; ++k) {
        int v = s + k * it.length;
        if (v <= inst.capacity) grown.insert(v);
      }
    sums = grown;
  }
  return sums;
}

// Adjacency + capacity check of one ordered bin, straight from the problem
// statement.
inline bool pattern_ok(const cbpp::Instance& inst, const std::vector<int>& items) {
  long long len = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const cbpp::Item& it = inst.item(items[i]);
    len += it.length;
    if (i > 0 && inst.item(items[i - 1]).color == it.color) return false;
  }
  return len <= inst.capacity;
}

// Full solution check: every bin ok as ordered, demands covered exactly.
inline bool solution_ok(const cbpp::Instance& inst, const cbpp::Solution& sol) {
  std::map<int, long long> used;
  for (const cbpp::PackingPattern& pat : sol.bins) {
    if (!pattern_ok(inst, pat.items)) return false;
    for (int id : pat.items) ++used[id];
  }
  for (const cbpp::Item& it : inst.items)
    if (used[it.id] != it.demand) return false;
  return true;
}

struct RandomOpts {
  int max_m = 4;
  int max_L = 20;
  int max_Q = 4;
  int max_demand = 3;
  long long max_total_copies = 8;  // 0: uncapped
};

inline cbpp::Instance random_instance(cbpp::SplitMix64& rng, const RandomOpts& o = {}) {
  while (true) {
    cbpp::Instance inst;
    inst.capacity = static_cast<int>(rng.next_int(2, o.max_L));
    inst.num_colors = static_cast<int>(rng.next_int(2, o.max_Q));
    int m = static_cast<int>(rng.next_int(1, o.max_m));
    std::set<std::pair<int, int>> seen;
    long long total = 0;
    for (int id = 1; id <= m; ++id) {
      int len = 0, col = 0, tries = 0;
      bool fresh = false;
      while (tries++ < 64 && !fresh) {
        len = static_cast<int>(rng.next_int(1, inst.capacity));
        col = static_cast<int>(rng.next_int(1, inst.num_colors));
        fresh = seen.insert({len, col}).second;
      }
      if (!fresh) break;
      int d = static_cast<int>(rng.next_int(1, o.max_demand));
      total += d;
      inst.items.push_back({id, len, d, col});
    }
    if (inst.items.empty()) continue;
    if (o.max_total_copies > 0 && total > o.max_total_copies) continue;
    cbpp::validate_instance(inst);
    return inst;
  }
}

}  // namespace fixtures
