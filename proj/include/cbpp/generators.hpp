#pragma once

// Benchmark instance generation. Everything is a pure function of
// (master seed, parameter tuple, replicate): each instance draws from its own
// SplitMix64 stream derived from those, so regeneration is byte-identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/rng.hpp"
#include "cbpp/solution.hpp"

namespace cbpp {

struct GeneratorConfig {
  std::string family;  // "uniform" | "zipf"
  int M = 0;           // item copies to draw
  int L = 0;           // bin capacity
  int Q = 0;           // colors (uniform only)
  double w_lo = 0.0, w_hi = 0.0;  // relative length window
  std::uint64_t seed = 0;
  int replicate = 0;
};

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Length window [ceil(w_lo L), floor(w_hi L)]; the epsilon absorbs cases like
// 0.1 * 500 landing a hair above the integer it names.
inline std::pair<int, int> length_window(const GeneratorConfig& cfg) {
  int lo = static_cast<int>(std::ceil(cfg.w_lo * cfg.L - 1e-9));
  int hi = static_cast<int>(std::floor(cfg.w_hi * cfg.L + 1e-9));
  lo = std::max(lo, 1);
  hi = std::min(hi, cfg.L);
  if (lo > hi)
    throw GenerationError("empty length window [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] for L = " + std::to_string(cfg.L));
  return {lo, hi};
}

// Merge drawn (length, color) copies into demand-aggregated items, ids in
// (length, color) order.
inline Instance merge_copies(const std::vector<std::pair<int, int>>& copies, int L, int Q) {
  std::map<std::pair<int, int>, int> demand;
  for (const auto& lc : copies) ++demand[lc];
  Instance inst;
  inst.capacity = L;
  inst.num_colors = Q;
  int id = 0;
  for (const auto& [lc, d] : demand) inst.items.push_back({++id, lc.first, d, lc.second});
  validate_instance(inst);
  return inst;
}

}  // namespace detail

// The parameter tuple shared by a replicate group, and the per-file name.
inline std::string class_label(const GeneratorConfig& cfg) {
  std::string s = cfg.family + "-M" + std::to_string(cfg.M) + "-L" + std::to_string(cfg.L);
  if (cfg.family == "uniform")
    s += "-Q" + std::to_string(cfg.Q) + "-W" + detail::fmt2(cfg.w_lo) + "-" + detail::fmt2(cfg.w_hi);
  return s;
}

inline std::string instance_name(const GeneratorConfig& cfg) {
  return class_label(cfg) + "-r" + std::to_string(cfg.replicate);
}

inline Instance gen_uniform(const GeneratorConfig& cfg) {
  if (cfg.family != "uniform") throw GenerationError("config family is not 'uniform'");
  if (cfg.M < 1 || cfg.L < 1 || cfg.Q < 2) throw GenerationError("need M >= 1, L >= 1, Q >= 2");
  auto [lo, hi] = detail::length_window(cfg);
  SplitMix64 rng(derive_stream(cfg.seed, instance_name(cfg)));
  std::vector<std::pair<int, int>> copies;
  copies.reserve(static_cast<std::size_t>(cfg.M));
  for (int k = 0; k < cfg.M; ++k) {
    int len = static_cast<int>(rng.next_int(lo, hi));
    int col = static_cast<int>(rng.next_int(1, cfg.Q));
    copies.push_back({len, col});
  }
  return detail::merge_copies(copies, cfg.L, cfg.Q);
}

// Colors are ranks drawn with probability proportional to 1/k^2, support cut
// at M; Q becomes the largest rank drawn (floored at 2 to keep the instance
// well-formed).
inline Instance gen_zipf(const GeneratorConfig& cfg) {
  if (cfg.family != "zipf") throw GenerationError("config family is not 'zipf'");
  if (cfg.M < 1 || cfg.L < 1) throw GenerationError("need M >= 1, L >= 1");
  auto [lo, hi] = detail::length_window(cfg);
  std::vector<double> cum(static_cast<std::size_t>(cfg.M));
  double total = 0.0;
  for (int k = 1; k <= cfg.M; ++k) {
    total += 1.0 / (static_cast<double>(k) * k);
    cum[static_cast<std::size_t>(k - 1)] = total;
  }
  SplitMix64 rng(derive_stream(cfg.seed, instance_name(cfg)));
  std::vector<std::pair<int, int>> copies;
  int q_max = 0;
  for (int k = 0; k < cfg.M; ++k) {
    int len = static_cast<int>(rng.next_int(lo, hi));
    double u = rng.next_double() * total;
    int rank = 1 + static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    rank = std::min(rank, cfg.M);
    q_max = std::max(q_max, rank);
    copies.push_back({len, rank});
  }
  return detail::merge_copies(copies, cfg.L, std::max(q_max, 2));
}

inline Instance generate(const GeneratorConfig& cfg) {
  if (cfg.family == "uniform") return gen_uniform(cfg);
  if (cfg.family == "zipf") return gen_zipf(cfg);
  throw GenerationError("unknown family '" + cfg.family + "'");
}

// The two benchmark grids: 2*3*3*2*10 = 360 uniform and 2*3*10 = 60 zipf
// configurations.
inline std::vector<GeneratorConfig> uniform_grid(std::uint64_t seed) {
  std::vector<GeneratorConfig> out;
  for (int M : {300, 500})
    for (int L : {500, 750, 1000})
      for (int Q : {2, 7, 15})
        for (auto [w_lo, w_hi] : {std::pair<double, double>{0.1, 0.8}, {0.01, 0.25}})
          for (int r = 0; r < 10; ++r)
            out.push_back({"uniform", M, L, Q, w_lo, w_hi, seed, r});
  return out;
}

inline std::vector<GeneratorConfig> zipf_grid(std::uint64_t seed) {
  std::vector<GeneratorConfig> out;
  for (int M : {300, 500})
    for (int L : {300, 500, 750})
      for (int r = 0; r < 10; ++r)
        out.push_back({"zipf", M, L, 0, 0.01, 0.25, seed, r});
  return out;
}

// ---------------------------------------------------------------------------
// Adapting plain bin packing instances: the caller supplies the instance and
// a claimed optimal solution; each bin is sorted non-increasing and its first
// ceil(k/2) copies get color 1, the rest color 2, which keeps every bin
// alternatable, so the donor's bin count carries over as a feasible value.
// ---------------------------------------------------------------------------

struct BppInstance {
  int capacity = 0;
  std::vector<int> lengths;  // one entry per copy
};

// Plain text: item count, capacity, then one length per line.
inline BppInstance parse_bpp_instance(std::istream& in) {
  std::vector<long long> nums;
  long long v;
  while (in >> v) nums.push_back(v);
  if (nums.size() < 2) throw IoError("truncated bin packing instance");
  long long n = nums[0];
  if (n < 1 || static_cast<long long>(nums.size()) != n + 2)
    throw IoError("bin packing instance should hold " + std::to_string(n) + " lengths");
  BppInstance bpp;
  bpp.capacity = static_cast<int>(nums[1]);
  for (std::size_t i = 2; i < nums.size(); ++i) bpp.lengths.push_back(static_cast<int>(nums[i]));
  return bpp;
}

// One bin per line, space-separated lengths.
inline std::vector<std::vector<int>> parse_bpp_bins(std::istream& in) {
  std::vector<std::vector<int>> bins;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<int> bin;
    int len;
    while (ls >> len) bin.push_back(len);
    if (!bin.empty()) bins.push_back(std::move(bin));
  }
  return bins;
}

struct AdaptedInstance {
  Instance instance;
  Solution solution;  // the donor optimum, recolored and sequenced
};

inline AdaptedInstance adapt_bpplib(const BppInstance& bpp,
                                    const std::vector<std::vector<int>>& bins) {
  if (bpp.capacity < 1) throw AdaptationError("capacity must be >= 1");
  std::map<int, int> want;
  for (int l : bpp.lengths) {
    if (l < 1 || l > bpp.capacity)
      throw AdaptationError("length " + std::to_string(l) + " is out of range");
    ++want[l];
  }
  std::map<int, int> got;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    long long len = 0;
    for (int l : bins[b]) {
      len += l;
      ++got[l];
    }
    if (len > bpp.capacity)
      throw AdaptationError("claimed bin " + std::to_string(b + 1) + " exceeds the capacity");
  }
  if (got != want) throw AdaptationError("claimed bins do not cover the lengths exactly");

  // Recolor: (length, color) copies per bin.
  std::vector<std::vector<std::pair<int, int>>> colored;
  for (const std::vector<int>& bin : bins) {
    std::vector<int> sorted = bin;
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    std::vector<std::pair<int, int>> cb;
    std::size_t head = (sorted.size() + 1) / 2;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      cb.push_back({sorted[i], i < head ? 1 : 2});
    colored.push_back(std::move(cb));
  }

  std::vector<std::pair<int, int>> copies;
  for (const auto& cb : colored) copies.insert(copies.end(), cb.begin(), cb.end());
  AdaptedInstance out;
  out.instance = detail::merge_copies(copies, bpp.capacity, 2);

  std::map<std::pair<int, int>, int> id_of;
  for (const Item& it : out.instance.items) id_of[{it.length, it.color}] = it.id;
  for (const auto& cb : colored) {
    ItemMultiset ms;
    for (const auto& lc : cb) ms.add(id_of.at(lc));
    out.solution.bins.push_back(alternate(ms, out.instance));
  }
  return out;
}

}  // namespace cbpp
