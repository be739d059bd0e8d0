#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/multiset.hpp"

namespace cbpp {

// An ordered bin content: item ids in packing order.
struct PackingPattern {
  std::vector<int> items;

  bool empty() const { return items.empty(); }

  long long total_length(const Instance& inst) const {
    long long s = 0;
    for (int id : items) s += inst.item(id).length;
    return s;
  }

  ItemMultiset multiset() const {
    ItemMultiset ms;
    for (int id : items) ms.add(id);
    return ms;
  }

  // True when no two consecutive entries share a color.
  bool alternation_ok(const Instance& inst) const {
    for (std::size_t i = 1; i < items.size(); ++i)
      if (inst.item(items[i - 1]).color == inst.item(items[i]).color) return false;
    return true;
  }
};

struct Solution {
  std::vector<PackingPattern> bins;

  int num_bins() const { return static_cast<int>(bins.size()); }
};

// Sequences a feasible multiset (delta <= 1) with no equal-color neighbours:
// open one subsequence per copy of the most frequent color, then deal the
// remaining colors' copies round-robin over the subsequences and concatenate.
// Colors are processed by non-increasing copy count, ties by smaller index;
// within a color, copies come in item-id order.
inline PackingPattern alternate(const ItemMultiset& s, const Instance& inst) {
  DiscrepancyReport rep = discrepancy(s, inst);  // also validates the multiset
  if (rep.delta >= 2)
    throw InfeasibleMultisetError("multiset is not alternatable: delta = " +
                                  std::to_string(rep.delta));
  if (s.empty()) return {};

  std::vector<std::vector<int>> ids_of_color(static_cast<std::size_t>(inst.num_colors) + 1);
  for (const auto& [id, c] : s.counts)
    for (int k = 0; k < c; ++k) ids_of_color[static_cast<std::size_t>(inst.item(id).color)].push_back(id);

  std::vector<int> order;
  for (int q = 1; q <= inst.num_colors; ++q)
    if (!ids_of_color[static_cast<std::size_t>(q)].empty()) order.push_back(q);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return ids_of_color[static_cast<std::size_t>(a)].size() > ids_of_color[static_cast<std::size_t>(b)].size();
  });

  const std::vector<int>& first = ids_of_color[static_cast<std::size_t>(order[0])];
  std::vector<std::vector<int>> seqs(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) seqs[i].push_back(first[i]);
  std::size_t j = 0;
  for (std::size_t c = 1; c < order.size(); ++c)
    for (int id : ids_of_color[static_cast<std::size_t>(order[c])]) {
      seqs[j].push_back(id);
      j = (j + 1 == seqs.size()) ? 0 : j + 1;
    }

  PackingPattern pat;
  for (const auto& seq : seqs) pat.items.insert(pat.items.end(), seq.begin(), seq.end());
  if (!pat.alternation_ok(inst))
    throw Error("internal: alternate produced equal-color neighbours");
  return pat;
}

enum class VerifyMode { AsOrdered, Existential };

struct Violation {
  int bin = -1;  // -1 for instance-global violations
  std::string kind;  // capacity | adjacency | discrepancy | demand | unknown-item
  std::string message;
};

struct VerificationReport {
  bool valid = true;
  std::vector<Violation> violations;
  // Existential mode: witness arrangement per bin (empty when a bin fails).
  std::vector<PackingPattern> witnesses;
};

// Checks a claimed solution: per-bin capacity, demand coverage (exact), and
// color feasibility either of the given orderings (AsOrdered) or of some
// reordering (Existential). All violations are reported, none throw.
inline VerificationReport verify_solution(const Instance& inst, const Solution& sol,
                                          VerifyMode mode) {
  VerificationReport rep;
  auto flag = [&](int bin, const std::string& kind, const std::string& msg) {
    rep.valid = false;
    rep.violations.push_back({bin, kind, msg});
  };

  std::vector<long long> used(static_cast<std::size_t>(inst.num_items()) + 1, 0);
  for (int b = 0; b < sol.num_bins(); ++b) {
    const PackingPattern& pat = sol.bins[static_cast<std::size_t>(b)];
    long long len = 0;
    bool ids_ok = true;
    ItemMultiset ms;
    for (int id : pat.items) {
      if (!inst.has_item(id)) {
        flag(b, "unknown-item", "bin " + std::to_string(b + 1) + " references item " +
                                    std::to_string(id));
        ids_ok = false;
        continue;
      }
      used[static_cast<std::size_t>(id)] += 1;
      len += inst.item(id).length;
      ms.add(id);
    }
    if (len > inst.capacity)
      flag(b, "capacity", "bin " + std::to_string(b + 1) + " packs length " +
                              std::to_string(len) + " > " + std::to_string(inst.capacity));
    if (!ids_ok) {
      if (mode == VerifyMode::Existential) rep.witnesses.emplace_back();
      continue;
    }
    bool counts_ok = true;
    for (const auto& [id, c] : ms.counts)
      if (c > inst.item(id).demand) {
        flag(b, "demand", "bin " + std::to_string(b + 1) + " uses item " + std::to_string(id) +
                              " " + std::to_string(c) + " times, demand is " +
                              std::to_string(inst.item(id).demand));
        counts_ok = false;
      }
    if (mode == VerifyMode::AsOrdered) {
      for (std::size_t i = 1; i < pat.items.size(); ++i)
        if (inst.item(pat.items[i - 1]).color == inst.item(pat.items[i]).color)
          flag(b, "adjacency", "bin " + std::to_string(b + 1) + " places color " +
                                   std::to_string(inst.item(pat.items[i]).color) +
                                   " at consecutive positions " + std::to_string(i) + "," +
                                   std::to_string(i + 1));
    } else {
      if (!counts_ok) {
        rep.witnesses.emplace_back();
        continue;
      }
      DiscrepancyReport d = discrepancy(ms, inst);
      if (d.delta > 1) {
        flag(b, "discrepancy", "bin " + std::to_string(b + 1) + " has discrepancy " +
                                   std::to_string(d.delta) + " (color " +
                                   std::to_string(d.critical_color) + ")");
        rep.witnesses.emplace_back();
      } else {
        rep.witnesses.push_back(alternate(ms, inst));
      }
    }
  }

  for (const Item& it : inst.items)
    if (used[static_cast<std::size_t>(it.id)] != it.demand)
      flag(-1, "demand", "item " + std::to_string(it.id) + " packed " +
                             std::to_string(used[static_cast<std::size_t>(it.id)]) +
                             " times, demand is " + std::to_string(it.demand));
  return rep;
}

// Solution text: one bin per line, item ids in pattern order, '#' comments.
inline Solution parse_solution(std::istream& in) {
  Solution sol;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (detail::blank_line(line)) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream ls(line);
    PackingPattern pat;
    int id = 0;
    while (ls >> id) pat.items.push_back(id);
    if (!ls.eof())
      throw IoError("solution line " + std::to_string(line_no) + ": expected item ids");
    sol.bins.push_back(std::move(pat));
  }
  return sol;
}

inline Solution read_solution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open solution file: " + path);
  std::istream& s = in;
  try {
    return parse_solution(s);
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline std::string format_solution(const Solution& sol) {
  std::ostringstream out;
  for (const PackingPattern& pat : sol.bins) {
    for (std::size_t i = 0; i < pat.items.size(); ++i)
      out << (i ? " " : "") << pat.items[i];
    out << "\n";
  }
  return out.str();
}

inline void write_solution_file(const std::string& path, const Solution& sol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write solution file: " + path);
  out << format_solution(sol);
  if (!out) throw IoError("short write: " + path);
}

}  // namespace cbpp
