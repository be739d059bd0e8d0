#pragma once

// Experiment harness: run every *.cbpp instance in a directory against the
// chosen formulations, verify what comes back, and emit a CSV plus per-class
// aggregates. Solves are pure per instance, so the harness parallelizes over
// (instance, model) pairs and keeps the row order deterministic.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/solve.hpp"

namespace cbpp {

struct BenchConfig {
  long long time_limit_ms = 1'800'000;
  int workers = 1;
  std::vector<std::string> models = {"ca", "ml"};
  bool normal_patterns = true;
};

struct BenchRow {
  std::string instance;  // file stem
  std::string cls;       // class label ("" when the file does not say)
  std::string model;
  std::string status;
  double lb = -kInf;
  double ub = kInf;
  bool has_gap = false;
  double gap = 0.0;
  long long nodes = 0;
  long long time_ms = 0;
};

namespace detail {

inline std::string csv_num(double v) {
  if (!(v > -kInf && v < kInf)) return "--";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

struct BenchReport {
  std::vector<BenchRow> rows;

  std::string to_csv() const {
    std::ostringstream out;
    out << "instance,class,model,status,lb,ub,gap,nodes,time_ms\n";
    for (const BenchRow& r : rows) {
      out << r.instance << "," << r.cls << "," << r.model << "," << r.status << ","
          << detail::csv_num(r.lb) << "," << detail::csv_num(r.ub) << ","
          << (r.has_gap ? detail::csv_num(r.gap) : "--") << "," << r.nodes << "," << r.time_ms
          << "\n";
    }
    return out.str();
  }

  // Per (class, model): instances, optimally solved, mean time, mean gap over
  // rows that have one.
  std::string summary_csv() const {
    struct Agg {
      long long count = 0, opt = 0, with_gap = 0;
      double time_ms = 0.0, gap = 0.0;
    };
    std::map<std::pair<std::string, std::string>, Agg> by_class;
    for (const BenchRow& r : rows) {
      Agg& a = by_class[{r.cls, r.model}];
      ++a.count;
      if (r.status == "optimal") ++a.opt;
      a.time_ms += static_cast<double>(r.time_ms);
      if (r.has_gap) {
        ++a.with_gap;
        a.gap += r.gap;
      }
    }
    std::ostringstream out;
    out << "class,model,count,opt,mean_time_ms,mean_gap\n";
    for (const auto& [key, a] : by_class) {
      out << key.first << "," << key.second << "," << a.count << "," << a.opt << ","
          << detail::csv_num(a.time_ms / static_cast<double>(a.count)) << ","
          << (a.with_gap ? detail::csv_num(a.gap / static_cast<double>(a.with_gap)) : "--")
          << "\n";
    }
    return out.str();
  }
};

inline BenchReport run_bench(const std::string& instance_dir, const BenchConfig& cfg = {}) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(instance_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".cbpp")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  struct Task {
    fs::path file;
    std::string model;
  };
  std::vector<Task> tasks;
  for (const fs::path& f : files)
    for (const std::string& m : cfg.models) tasks.push_back({f, m});

  BenchReport report;
  report.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      const Task& task = tasks[t];
      BenchRow& row = report.rows[t];
      row.instance = task.file.stem().string();
      row.model = task.model;
      try {
        ParsedInstance parsed = read_instance_file(task.file.string());
        row.cls = parsed.class_label;
        SolveOptions opts;
        opts.model = task.model;
        opts.normal_patterns = cfg.normal_patterns;
        opts.time_limit_ms = cfg.time_limit_ms;
        SolveOutcome out = solve_instance(parsed.instance, opts);
        row.status = to_string(out.status);
        row.lb = out.lb;
        row.ub = out.ub;
        row.nodes = out.nodes;
        row.time_ms = out.elapsed_ms;
        if (out.ub < kInf && out.ub > 0) {
          row.has_gap = true;
          row.gap = out.gap();
        }
      } catch (const std::exception& e) {
        row.status = "error";
        (void)e;
      }
    }
  };

  int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  return report;
}

}  // namespace cbpp
