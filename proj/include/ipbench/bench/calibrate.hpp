#ifndef IPBENCH_BENCH_CALIBRATE_HPP
#define IPBENCH_BENCH_CALIBRATE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ipbench/bench/run_matrix.hpp"

namespace ipbench::bench {

struct CalibrationPlan {
  std::vector<int> worker_counts;
  int repetitions = 1;
};

// Worker counts 2, 4, ..., 72 with five repetitions each.
inline CalibrationPlan paper_sweep() {
  CalibrationPlan plan;
  for (int w = 2; w <= 72; w += 2) plan.worker_counts.push_back(w);
  plan.repetitions = 5;
  return plan;
}

struct CalibrationEntry {
  int workers = 0;
  double mean_seconds = 0.0;
  double normalized = 0.0;  // NaN when invalid
  bool valid = false;       // every repetition solved
};

struct CalibrationResult {
  std::vector<CalibrationEntry> entries;  // ascending worker count
  int best_workers = 0;                   // 0 when no count is valid
  double min_mean = std::numeric_limits<double>::quiet_NaN();
  double max_mean = std::numeric_limits<double>::quiet_NaN();
  std::vector<RunRecord> runs;
};

// Means, normalized means and argmin from raw runs of a single problem.
inline CalibrationResult summarize_calibration(std::vector<RunRecord> runs) {
  struct Acc {
    double sum = 0.0;
    int n = 0;
    bool all_solved = true;
  };
  std::map<int, Acc> by_workers;
  for (const auto& r : runs) {
    auto& a = by_workers[r.workers];
    a.sum += r.wall_seconds;
    ++a.n;
    a.all_solved = a.all_solved && r.solved();
  }
  CalibrationResult res;
  for (const auto& [w, a] : by_workers) {
    CalibrationEntry e;
    e.workers = w;
    e.mean_seconds = a.sum / a.n;
    e.valid = a.all_solved;
    res.entries.push_back(e);
  }
  for (const auto& e : res.entries) {
    if (!e.valid) continue;
    if (res.best_workers == 0 || e.mean_seconds < res.min_mean) {
      res.min_mean = e.mean_seconds;
      res.best_workers = e.workers;
    }
    if (!(e.mean_seconds <= res.max_mean)) res.max_mean = e.mean_seconds;
  }
  for (auto& e : res.entries) {
    if (!e.valid) {
      e.normalized = std::numeric_limits<double>::quiet_NaN();
    } else if (res.max_mean == res.min_mean) {
      e.normalized = 0.0;
    } else {
      e.normalized = (e.mean_seconds - res.min_mean) / (res.max_mean - res.min_mean);
    }
  }
  sort_canonical(runs);
  res.runs = std::move(runs);
  return res;
}

// `run(workers, repetition)` produces one timed record.
using CalibrationRunner = std::function<RunRecord(int workers, int repetition)>;

inline CalibrationResult calibrate(const CalibrationPlan& plan, const CalibrationRunner& run) {
  if (plan.worker_counts.empty()) throw InvalidInput("calibrate: no worker counts");
  if (plan.repetitions < 1) throw InvalidInput("calibrate: repetitions must be at least 1");
  for (int w : plan.worker_counts)
    if (w < 1) throw InvalidInput("calibrate: worker counts must be positive");
  std::vector<RunRecord> runs;
  for (int w : plan.worker_counts)
    for (int rep = 0; rep < plan.repetitions; ++rep) runs.push_back(run(w, rep));
  return summarize_calibration(std::move(runs));
}

inline CalibrationResult calibrate(const problems::GeneratedNlp& g, const std::string& backend,
                                   const CalibrationPlan& plan, const ip::SolverOptions& opt = {}) {
  opt.validate();
  return calibrate(plan, [&](int w, int rep) { return run_cell(g, BackendSpec{backend, w}, opt, rep); });
}

}  // namespace ipbench::bench

#endif  // IPBENCH_BENCH_CALIBRATE_HPP
