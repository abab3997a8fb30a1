#ifndef IPBENCH_BENCH_RUN_MATRIX_HPP
#define IPBENCH_BENCH_RUN_MATRIX_HPP

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ipbench/bench/records.hpp"
#include "ipbench/ip/solver.hpp"
#include "ipbench/problems/census.hpp"

namespace ipbench::bench {

struct BackendSpec {
  std::string id = "sparse";
  int workers = 1;
};

struct MatrixOptions {
  int repetitions = 1;
  // Cells run on `cell_threads` threads; records are then stamped as
  // timing-unreliable.
  bool concurrent = false;
  int cell_threads = 2;
};

using CellSolver =
    std::function<ip::SolveResult(const problems::GeneratedNlp&, const BackendSpec&, const ip::SolverOptions&)>;

inline ip::SolveResult solve_cell(const problems::GeneratedNlp& g, const BackendSpec& b, const ip::SolverOptions& opt) {
  return ip::solve(*g.problem, b.id, opt, b.workers);
}

// One timed solve. Exceptions become a Diverged record so the matrix
// always completes.
inline RunRecord run_cell(const problems::GeneratedNlp& g, const BackendSpec& b, const ip::SolverOptions& opt,
                          int repetition, const CellSolver& solver = solve_cell) {
  RunRecord r;
  r.problem_id = g.id;
  r.backend_id = b.id;
  r.workers = b.workers;
  r.repetition = repetition;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ip::SolveResult res = solver(g, b, opt);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.status = res.status;
    r.iterations = res.iterations;
    if (res.status != ip::Status::DegreesOfFreedomError) r.objective = res.objective;
  } catch (const std::exception&) {
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.status = ip::Status::Diverged;
  }
  return r;
}

// Every (problem, backend, repetition) cell, sorted canonically.
inline std::vector<RunRecord> run_matrix(const std::vector<problems::GeneratedNlp>& problem_set,
                                         const std::vector<BackendSpec>& backends, const ip::SolverOptions& opt,
                                         const MatrixOptions& mopt = {}, const CellSolver& solver = solve_cell) {
  if (problem_set.empty() || backends.empty()) throw InvalidInput("run_matrix: empty problem or backend list");
  if (mopt.repetitions < 1) throw InvalidInput("run_matrix: repetitions must be at least 1");
  opt.validate();

  struct Cell {
    std::size_t problem, backend;
    int repetition;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < problem_set.size(); ++p)
    for (std::size_t b = 0; b < backends.size(); ++b)
      for (int rep = 0; rep < mopt.repetitions; ++rep) cells.push_back({p, b, rep});

  std::vector<RunRecord> records(cells.size());
  auto run = [&](std::size_t k) {
    const Cell& c = cells[k];
    records[k] = run_cell(problem_set[c.problem], backends[c.backend], opt, c.repetition, solver);
  };
  if (!mopt.concurrent || mopt.cell_threads <= 1) {
    for (std::size_t k = 0; k < cells.size(); ++k) run(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < mopt.cell_threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) run(k);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& r : records) r.timing_reliable = false;
  }
  sort_canonical(records);
  return records;
}

}  // namespace ipbench::bench

#endif  // IPBENCH_BENCH_RUN_MATRIX_HPP
