#pragma once

#include <map>
#include <string>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/instance.hpp"

namespace cbpp {

// A multiset of item copies, stored as item id -> copy count. Used for bin
// contents and for whole-instance discrepancy arithmetic.
struct ItemMultiset {
  std::map<int, int> counts;

  void add(int id, int n = 1) {
    if (n == 0) return;
    counts[id] += n;
    if (counts[id] == 0) counts.erase(id);
  }

  int count(int id) const {
    auto it = counts.find(id);
    return it == counts.end() ? 0 : it->second;
  }

  bool empty() const { return counts.empty(); }

  long long total_copies() const {
    long long n = 0;
    for (const auto& [id, c] : counts) n += c;
    return n;
  }

  long long total_length(const Instance& inst) const {
    long long s = 0;
    for (const auto& [id, c] : counts)
      s += static_cast<long long>(inst.item(id).length) * c;
    return s;
  }

  // Whole-instance multiset I' (every item at full demand).
  static ItemMultiset all_items(const Instance& inst) {
    ItemMultiset s;
    for (const Item& it : inst.items) s.counts[it.id] = it.demand;
    return s;
  }
};

namespace detail {

// Shared precondition check: ids known, counts within [0, demand].
inline void check_multiset(const ItemMultiset& s, const Instance& inst) {
  for (const auto& [id, c] : s.counts) {
    if (!inst.has_item(id))
      throw MalformedMultisetError("multiset references unknown item id " + std::to_string(id));
    if (c < 0)
      throw MalformedMultisetError("negative copy count for item " + std::to_string(id));
    if (c > inst.item(id).demand)
      throw MalformedMultisetError("item " + std::to_string(id) + ": count " +
                                   std::to_string(c) + " exceeds demand " +
                                   std::to_string(inst.item(id).demand));
  }
}

// Copy counts per color, indexed 1..Q.
inline std::vector<long long> copies_by_color(const ItemMultiset& s, const Instance& inst) {
  std::vector<long long> by_color(static_cast<std::size_t>(inst.num_colors) + 1, 0);
  for (const auto& [id, c] : s.counts) by_color[static_cast<std::size_t>(inst.item(id).color)] += c;
  return by_color;
}

}  // namespace detail

// delta_q = (#copies of color q) - (#copies of all other colors) = 2|S_q| - |S|.
// delta is the maximum over colors; the critical color is the smallest
// maximizing index. An empty multiset has delta_q = 0 for every q.
struct DiscrepancyReport {
  std::map<int, long long> per_color;  // q -> delta_q, for every q in [1, Q]
  long long delta = 0;
  int critical_color = 0;
};

inline DiscrepancyReport discrepancy(const ItemMultiset& s, const Instance& inst) {
  detail::check_multiset(s, inst);
  std::vector<long long> by_color = detail::copies_by_color(s, inst);
  const long long total = s.total_copies();
  DiscrepancyReport rep;
  rep.critical_color = 1;
  for (int q = 1; q <= inst.num_colors; ++q) {
    long long d = 2 * by_color[static_cast<std::size_t>(q)] - total;
    rep.per_color[q] = d;
    if (q == 1 || d > rep.delta) {
      rep.delta = d;
      rep.critical_color = q;
    }
  }
  return rep;
}

// Feasibility of sequencing S with no two equal colors adjacent, via the
// discrepancy route: feasible iff delta(S) <= 1.
inline bool is_alternatable(const ItemMultiset& s, const Instance& inst) {
  return discrepancy(s, inst).delta <= 1;
}

// Same predicate via the majority-count route: feasible iff the most frequent
// color has at most ceil(|S|/2) copies. Kept separate so the two
// characterizations can be cross-checked against each other.
inline bool is_alternatable_majority(const ItemMultiset& s, const Instance& inst) {
  detail::check_multiset(s, inst);
  std::vector<long long> by_color = detail::copies_by_color(s, inst);
  long long top = 0;
  for (int q = 1; q <= inst.num_colors; ++q)
    if (by_color[static_cast<std::size_t>(q)] > top) top = by_color[static_cast<std::size_t>(q)];
  const long long total = s.total_copies();
  return top <= (total + 1) / 2;
}

}  // namespace cbpp
