#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipbench/bench.hpp"
#include "ipbench/problems/registry.hpp"

namespace fs = std::filesystem;
using namespace ipbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLimit = 2;
constexpr int kExitError = 3;

struct RunConfig {
  std::vector<std::string> kinds;
  std::optional<Index> n;
  std::string n_range;  // start:stop:step, stop inclusive
  std::vector<std::string> backends{"sparse"};
  std::optional<int> workers;
  std::vector<int> worker_counts;
  double tol = 1e-8;
  Index max_iter = 3000;
  double time_limit = 3600.0;
  std::string out;
  int reps = 1;
  bool paper_sweep = false;
  std::string records;
  double split = 60.0;
  std::optional<Index> total;
};

int exit_code(ip::Status s) {
  switch (s) {
    case ip::Status::Optimal:
    case ip::Status::Acceptable: return kExitOk;
    case ip::Status::IterationLimit:
    case ip::Status::TimeLimit: return kExitLimit;
    default: return kExitError;
  }
}

std::vector<Index> grid_sizes(const RunConfig& cfg) {
  if (!cfg.n_range.empty()) {
    std::vector<Index> parts;
    std::size_t pos = 0;
    while (pos <= cfg.n_range.size()) {
      const std::size_t colon = std::min(cfg.n_range.find(':', pos), cfg.n_range.size());
      const std::string tok = cfg.n_range.substr(pos, colon - pos);
      Index v = 0;
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size()) throw InvalidInput("bad --n-range: " + cfg.n_range);
      parts.push_back(v);
      pos = colon + 1;
    }
    if (parts.size() != 3 || parts[2] < 1 || parts[0] < 1 || parts[1] < parts[0]) {
      throw InvalidInput("--n-range must be start:stop:step with 1 <= start <= stop and step >= 1");
    }
    std::vector<Index> ns;
    for (Index v = parts[0]; v <= parts[1]; v += parts[2]) ns.push_back(v);
    return ns;
  }
  if (cfg.n) return {*cfg.n};
  return {};
}

std::vector<problems::GeneratedNlp> instances(const RunConfig& cfg) {
  if (cfg.kinds.empty()) throw InvalidInput("--kind is required");
  const auto ns = grid_sizes(cfg);
  std::vector<problems::GeneratedNlp> out;
  for (const auto& kind : cfg.kinds) {
    if (!problems::is_grid_kind(kind)) {
      out.push_back(problems::generate(kind));
      continue;
    }
    if (ns.empty()) throw InvalidInput("--n or --n-range is required for " + kind);
    for (Index n : ns) out.push_back(problems::generate(kind, n));
  }
  return out;
}

ip::SolverOptions solver_options(const RunConfig& cfg) {
  ip::SolverOptions opt;
  opt.tol = cfg.tol;
  opt.acceptable_tol = std::max(opt.acceptable_tol, cfg.tol);
  opt.max_iter = cfg.max_iter;
  opt.time_limit = cfg.time_limit;
  opt.validate();
  return opt;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  if (cfg.out.empty()) throw InvalidInput("--out is required");
  fs::create_directories(cfg.out);
  const fs::path path = fs::path(cfg.out) / name;
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path.string());
  return os;
}

int cmd_gen(const RunConfig& cfg) {
  for (const auto& g : instances(cfg)) {
    problems::write_manifest(std::cout, g);
    std::cout << '\n';
    if (!cfg.out.empty()) {
      auto os = open_output(cfg, g.id + ".manifest");
      problems::write_manifest(os, g);
    }
  }
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg) {
  const auto list = instances(cfg);
  if (list.size() != 1) throw InvalidInput("solve takes exactly one instance");
  const auto& g = list.front();
  const auto opt = solver_options(cfg);
  const int workers = ldl::resolve_workers(cfg.workers);

  const auto t0 = std::chrono::steady_clock::now();
  const auto res = ip::solve(*g.problem, cfg.backends.front(), opt, workers);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::cout << "problem    " << g.id << '\n'
            << "backend    " << cfg.backends.front() << " (workers " << workers << ")\n"
            << "status     " << ip::to_string(res.status) << '\n';
  if (!res.message.empty()) std::cout << "message    " << res.message << '\n';
  if (res.status != ip::Status::DegreesOfFreedomError) {
    std::cout << "objective  " << bench::format_double(res.objective) << '\n'
              << "iterations " << res.iterations << '\n'
              << "kkt_error  " << res.kkt_error << '\n';
  }
  std::cout << "seconds    " << seconds << " (linear " << res.timing.linear_solve_seconds << ", eval "
            << res.timing.function_eval_seconds << ")\n";

  if (!cfg.out.empty()) {
    bench::RunRecord r;
    r.problem_id = g.id;
    r.backend_id = cfg.backends.front();
    r.workers = workers;
    r.status = res.status;
    r.wall_seconds = seconds;
    r.iterations = res.iterations;
    if (res.status != ip::Status::DegreesOfFreedomError) r.objective = res.objective;
    auto os = open_output(cfg, "records.csv");
    bench::write_records_csv(os, {r});
  }
  return exit_code(res.status);
}

int cmd_bench(const RunConfig& cfg) {
  const auto list = instances(cfg);
  const auto opt = solver_options(cfg);
  const int workers = ldl::resolve_workers(cfg.workers);
  std::vector<bench::BackendSpec> backends;
  for (const auto& b : cfg.backends) backends.push_back({b, workers});
  bench::MatrixOptions mopt;
  mopt.repetitions = cfg.reps;
  const auto records = bench::run_matrix(list, backends, opt, mopt);

  auto os = open_output(cfg, "records.csv");
  bench::write_records_csv(os, records);
  for (const auto& r : records) {
    std::cout << r.problem_id << ' ' << r.backend_id << " rep " << r.repetition << ": " << ip::to_string(r.status)
              << " in " << r.wall_seconds << " s\n";
  }
  std::cout << records.size() << " records written to " << (fs::path(cfg.out) / "records.csv").string() << '\n';
  return kExitOk;
}

int cmd_profile(const RunConfig& cfg) {
  if (cfg.records.empty()) throw InvalidInput("--records is required");
  std::ifstream is(cfg.records);
  if (!is) throw InvalidInput("cannot read " + cfg.records);
  const auto set = bench::performance_profile(bench::read_records_csv(is), cfg.total);

  for (const auto& c : set.backends) {
    auto os = open_output(cfg, "profile_" + c.backend_id + ".csv");
    bench::write_profile_csv(os, c);
  }
  {
    auto os = open_output(cfg, "virtual_best.csv");
    bench::write_profile_csv(os, set.virtual_best);
  }
  {
    auto os = open_output(cfg, "virtual_worst.csv");
    bench::write_profile_csv(os, set.virtual_worst);
  }
  bench::SvgOptions svg;
  svg.split = cfg.split;
  auto os = open_output(cfg, "profile.svg");
  bench::write_profile_svg(os, set, svg);

  std::cout << "problems " << set.total_problems << '\n';
  auto report = [](const bench::ProfileCurve& c) {
    std::cout << c.backend_id << " solved " << (c.points.empty() ? 0 : c.points.back().solved) << '\n';
  };
  for (const auto& c : set.backends) report(c);
  report(set.virtual_best);
  report(set.virtual_worst);
  return kExitOk;
}

int cmd_calibrate(const RunConfig& cfg) {
  const auto list = instances(cfg);
  if (list.size() != 1) throw InvalidInput("calibrate takes exactly one instance");
  bench::CalibrationPlan plan;
  if (cfg.paper_sweep) {
    plan = bench::paper_sweep();
  } else {
    if (cfg.worker_counts.empty()) throw InvalidInput("--worker-counts or --paper-sweep is required");
    plan.worker_counts = cfg.worker_counts;
    plan.repetitions = cfg.reps;
  }
  const auto res = bench::calibrate(list.front(), cfg.backends.front(), plan, solver_options(cfg));

  auto os = open_output(cfg, "calibration.csv");
  os << "workers,mean_seconds,normalized,valid\n";
  for (const auto& e : res.entries) {
    os << e.workers << ',' << bench::format_double(e.mean_seconds) << ','
       << (e.valid ? bench::format_double(e.normalized) : "") << ',' << (e.valid ? 1 : 0) << '\n';
    std::cout << "workers " << e.workers << ": mean " << e.mean_seconds << " s"
              << (e.valid ? "" : " (not every repetition solved)") << '\n';
  }
  auto raw = open_output(cfg, "calibration_runs.csv");
  bench::write_records_csv(raw, res.runs);
  if (res.best_workers == 0) {
    std::cout << "no worker count solved every repetition\n";
    return kExitError;
  }
  std::cout << "best workers " << res.best_workers << '\n';
  return kExitOk;
}

void add_problem_flags(CLI::App* sub, RunConfig& cfg, bool many_kinds) {
  auto* kind = many_kinds ? sub->add_option("--kind", cfg.kinds, "Problem kind; repeatable")
                          : sub->add_option("--kind", cfg.kinds, "Problem kind")->expected(1);
  kind->check(CLI::IsMember(problems::known_kinds()))->required();
  sub->add_option("--n", cfg.n, "Grid size N")->check(CLI::PositiveNumber);
  sub->add_option("--n-range", cfg.n_range, "Grid sizes start:stop:step, stop inclusive");
}

void add_solver_flags(CLI::App* sub, RunConfig& cfg, bool many_backends) {
  auto* backend = sub->add_option("--backend", cfg.backends, many_backends ? "Linear solver; repeatable" : "Linear solver")
                      ->check(CLI::IsMember({"sparse", "dense"}));
  if (!many_backends) backend->expected(1);
  sub->add_option("--tol", cfg.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-iter", cfg.max_iter, "Iteration limit")->check(CLI::NonNegativeNumber);
  sub->add_option("--time-limit", cfg.time_limit, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
}

// The config file's keys become `--key=value` arguments right after the
// subcommand name, skipping keys the command line already sets.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;
  auto given = [&](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> injected;
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty()) throw CLI::ConfigError("sections are not supported in " + path);
    const std::string flag = "--" + item.name;
    if (flag == "--config" || given(flag)) continue;
    for (const auto& value : item.inputs) injected.push_back(flag + "=" + value);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior-point benchmark driver"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen", "Generate instances and print their manifests");
  add_problem_flags(gen, cfg, true);
  gen->add_option("--out", cfg.out, "Directory for <id>.manifest files");

  auto* solve = app.add_subcommand("solve", "Solve one instance");
  add_problem_flags(solve, cfg, false);
  add_solver_flags(solve, cfg, false);
  solve->add_option("--workers", cfg.workers, "Factorization workers (default from " + std::string(ldl::kWorkersEnv) +
                                                   ", else 1)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", cfg.out, "Directory for records.csv");

  auto* bench_cmd = app.add_subcommand("bench", "Run the problem x backend matrix");
  add_problem_flags(bench_cmd, cfg, true);
  add_solver_flags(bench_cmd, cfg, true);
  bench_cmd->add_option("--workers", cfg.workers, "Factorization workers (default from " +
                                                      std::string(ldl::kWorkersEnv) + ", else 1)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", cfg.reps, "Repetitions per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", cfg.out, "Directory for records.csv")->required();

  auto* profile = app.add_subcommand("profile", "Build performance profiles from a records CSV");
  profile->add_option("--records", cfg.records, "Records CSV written by bench")->required();
  profile->add_option("--split", cfg.split, "Seconds where the time axis turns logarithmic")
      ->check(CLI::PositiveNumber);
  profile->add_option("--total", cfg.total, "Problem count for the vertical axis")->check(CLI::PositiveNumber);
  profile->add_option("--out", cfg.out, "Directory for profile CSVs and profile.svg")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Sweep worker counts on one instance");
  add_problem_flags(calibrate, cfg, false);
  add_solver_flags(calibrate, cfg, false);
  calibrate->add_option("--worker-counts", cfg.worker_counts, "Worker counts, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  calibrate->add_flag("--paper-sweep", cfg.paper_sweep, "Workers 2..72 step 2, five repetitions each");
  calibrate->add_option("--reps", cfg.reps, "Repetitions per worker count")->check(CLI::PositiveNumber);
  calibrate->add_option("--out", cfg.out, "Directory for calibration.csv and calibration_runs.csv")->required();

  std::string config_path;
  for (auto* sub : {gen, solve, bench_cmd, profile, calibrate}) {
    sub->add_option("--config", config_path, "File of key = value lines; flags override it");
  }

  try {
    auto args = expand_config(argc, argv);
    std::vector<char*> raw;
    for (auto& a : args) raw.push_back(a.data());
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*gen) return cmd_gen(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*bench_cmd) return cmd_bench(cfg);
    if (*profile) return cmd_profile(cfg);
    if (*calibrate) return cmd_calibrate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
