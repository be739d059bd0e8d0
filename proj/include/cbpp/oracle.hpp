#pragma once

// Independent reference implementations, exponential on purpose. Each guard
// is a hard error: silently degrading an oracle would poison every test that
// leans on it.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/multiset.hpp"
#include "cbpp/solution.hpp"

namespace cbpp {

// Exhaustive sequencing check: some ordering without equal-color neighbours?
inline bool brute_force_alternatable(const ItemMultiset& s, const Instance& inst) {
  if (s.total_copies() > 9)
    throw GuardError("brute_force_alternatable is limited to 9 copies, got " +
                     std::to_string(s.total_copies()));
  std::vector<int> counts(static_cast<std::size_t>(inst.num_colors) + 1, 0);
  for (const auto& [id, c] : s.counts) counts[static_cast<std::size_t>(inst.item(id).color)] += c;

  std::map<std::pair<std::vector<int>, int>, bool> memo;
  auto rec = [&](auto&& self, std::vector<int>& left, int last) -> bool {
    bool any = false;
    for (int c : left)
      if (c > 0) any = true;
    if (!any) return true;
    auto key = std::make_pair(left, last);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = false;
    for (int q = 1; q <= inst.num_colors && !ok; ++q) {
      if (q == last || left[static_cast<std::size_t>(q)] == 0) continue;
      --left[static_cast<std::size_t>(q)];
      ok = self(self, left, q);
      ++left[static_cast<std::size_t>(q)];
    }
    memo[key] = ok;
    return ok;
  };
  return rec(rec, counts, 0);
}

// Every feasible bin content: count vectors bounded by demands, total length
// within capacity, multiset alternatable. Lexicographic in the count vector.
inline std::vector<ItemMultiset> enumerate_patterns(const Instance& inst) {
  long long universe = 1;
  for (const Item& it : inst.items) {
    universe *= it.demand + 1;
    if (universe > 1000000)
      throw GuardError("enumerate_patterns universe exceeds 10^6 count vectors");
  }
  std::vector<ItemMultiset> out;
  std::vector<int> take(inst.items.size(), 0);
  while (true) {
    ItemMultiset ms;
    long long len = 0;
    for (std::size_t u = 0; u < take.size(); ++u) {
      if (take[u] == 0) continue;
      ms.add(inst.items[u].id, take[u]);
      len += static_cast<long long>(inst.items[u].length) * take[u];
    }
    if (!ms.empty() && len <= inst.capacity && is_alternatable(ms, inst)) out.push_back(ms);
    std::size_t u = take.size();
    while (u > 0 && take[u - 1] == inst.items[u - 1].demand) take[--u] = 0;
    if (u == 0) break;
    ++take[u - 1];
  }
  return out;
}

// Exhaustive branch over copy-to-bin assignments, new bins only in the first
// unused slot. Keeps the first optimum found, i.e. the lexicographically
// least assignment vector among the minimum-bin solutions.
inline Solution brute_force_opt(const Instance& inst) {
  validate_instance(inst);
  long long total = inst.total_copies();
  if (total > 8)
    throw GuardError("brute_force_opt is limited to 8 copies, got " + std::to_string(total));

  std::vector<int> copy_item;  // item id per copy, id order
  for (const Item& it : inst.items)
    for (int k = 0; k < it.demand; ++k) copy_item.push_back(it.id);

  std::vector<int> left_of_color(static_cast<std::size_t>(inst.num_colors) + 1, 0);
  for (const Item& it : inst.items) left_of_color[static_cast<std::size_t>(it.color)] += it.demand;
  long long left_total = total;

  std::vector<ItemMultiset> bins;
  std::vector<long long> bin_len;
  int best = static_cast<int>(total) + 1;
  std::vector<ItemMultiset> best_bins;

  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (static_cast<int>(bins.size()) >= best) return;
    if (k == copy_item.size()) {
      for (const ItemMultiset& b : bins)
        if (!is_alternatable(b, inst)) return;
      best = static_cast<int>(bins.size());
      best_bins = bins;
      return;
    }
    const Item& it = inst.item(copy_item[k]);
    --left_of_color[static_cast<std::size_t>(it.color)];
    --left_total;
    std::size_t limit = std::min(bins.size() + 1, static_cast<std::size_t>(best - 1));
    for (std::size_t b = 0; b < limit; ++b) {
      bool fresh = b == bins.size();
      if (fresh) {
        bins.emplace_back();
        bin_len.push_back(0);
      }
      if (bin_len[b] + it.length <= inst.capacity) {
        bins[b].add(it.id);
        bin_len[b] += it.length;
        // The bin can still balance out iff enough foreign copies remain.
        DiscrepancyReport rep = discrepancy(bins[b], inst);
        long long fixable = left_total - left_of_color[static_cast<std::size_t>(rep.critical_color)];
        if (rep.delta - fixable <= 1) self(self, k + 1);
        bins[b].add(it.id, -1);
        bin_len[b] -= it.length;
      }
      if (fresh) {
        bins.pop_back();
        bin_len.pop_back();
      }
    }
    ++left_of_color[static_cast<std::size_t>(it.color)];
    ++left_total;
  };
  rec(rec, 0);

  Solution sol;
  for (const ItemMultiset& b : best_bins) sol.bins.push_back(alternate(b, inst));
  return sol;
}

// Set-partitioning reference: cover the demands exactly with feasible
// patterns, minimizing the bin count. Memoized over residual demand vectors.
inline long long set_partition_opt(const Instance& inst) {
  validate_instance(inst);
  if (inst.total_copies() > 12)
    throw GuardError("set_partition_opt is limited to 12 copies, got " +
                     std::to_string(inst.total_copies()));
  std::vector<ItemMultiset> pats = enumerate_patterns(inst);
  std::vector<std::vector<int>> pat_counts;
  for (const ItemMultiset& p : pats) {
    std::vector<int> v(inst.items.size(), 0);
    for (const auto& [id, c] : p.counts) v[static_cast<std::size_t>(id - 1)] = c;
    pat_counts.push_back(std::move(v));
  }

  std::map<std::vector<int>, long long> memo;
  auto rec = [&](auto&& self, std::vector<int>& need) -> long long {
    std::size_t first = need.size();
    for (std::size_t u = 0; u < need.size(); ++u)
      if (need[u] > 0) {
        first = u;
        break;
      }
    if (first == need.size()) return 0;
    auto it = memo.find(need);
    if (it != memo.end()) return it->second;
    long long best = inst.total_copies() + 1;
    for (const std::vector<int>& p : pat_counts) {
      if (p[first] == 0) continue;
      bool fits = true;
      for (std::size_t u = 0; u < need.size() && fits; ++u)
        if (p[u] > need[u]) fits = false;
      if (!fits) continue;
      for (std::size_t u = 0; u < need.size(); ++u) need[u] -= p[u];
      best = std::min(best, 1 + self(self, need));
      for (std::size_t u = 0; u < need.size(); ++u) need[u] += p[u];
    }
    memo[need] = best;
    return best;
  };
  std::vector<int> need;
  for (const Item& it : inst.items) need.push_back(it.demand);
  return rec(rec, need);
}

}  // namespace cbpp
