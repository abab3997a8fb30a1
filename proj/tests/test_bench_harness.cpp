#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "ipbench/bench.hpp"
#include "ipbench/problems/registry.hpp"

using namespace ipbench;
using namespace ipbench::bench;
using ip::Status;

namespace {

RunRecord rec(std::string problem, std::string backend, double seconds, Status status = Status::Optimal,
              int repetition = 0, int workers = 1) {
  RunRecord r;
  r.problem_id = std::move(problem);
  r.backend_id = std::move(backend);
  r.workers = workers;
  r.status = status;
  r.wall_seconds = seconds;
  r.iterations = 10;
  r.objective = 1.5;
  r.repetition = repetition;
  return r;
}

// A solves p1..p3 in {1, 5, unsolved}; B solves all in 2.
std::vector<RunRecord> hand_example() {
  return {rec("p1", "A", 1.0), rec("p2", "A", 5.0), rec("p3", "A", 7.0, Status::IterationLimit),
          rec("p1", "B", 2.0), rec("p2", "B", 2.0), rec("p3", "B", 2.0)};
}

const ProfileCurve& curve(const ProfileSet& s, const std::string& id) {
  for (const auto& c : s.backends)
    if (c.backend_id == id) return c;
  throw std::runtime_error("no curve " + id);
}

std::vector<double> all_times(const ProfileSet& s) {
  std::set<double> t{0.0};
  auto add = [&](const ProfileCurve& c) {
    for (const auto& p : c.points) t.insert(p.time);
  };
  for (const auto& c : s.backends) add(c);
  add(s.virtual_best);
  add(s.virtual_worst);
  std::vector<double> out(t.begin(), t.end());
  out.push_back(out.back() + 1.0);
  return out;
}

void expect_dominance(const ProfileSet& s) {
  for (double t : all_times(s)) {
    for (const auto& c : s.backends) {
      EXPECT_GE(s.virtual_best.count_at(t), c.count_at(t)) << c.backend_id << " t=" << t;
      EXPECT_LE(s.virtual_worst.count_at(t), c.count_at(t)) << c.backend_id << " t=" << t;
    }
  }
}

}  // namespace

TEST(Profile, HandEnumeratedCurves) {
  const auto s = performance_profile(hand_example());
  EXPECT_EQ(s.total_problems, 3);
  const auto& a = curve(s, "A");
  const auto& b = curve(s, "B");
  EXPECT_EQ(a.count_at(0.5), 0);
  EXPECT_EQ(a.count_at(1.0), 1);
  EXPECT_EQ(a.count_at(2.0), 1);
  EXPECT_EQ(a.count_at(5.0), 2);
  EXPECT_EQ(a.count_at(100.0), 2);
  EXPECT_EQ(b.count_at(1.9), 0);
  EXPECT_EQ(b.count_at(2.0), 3);
  EXPECT_EQ(a.points, (std::vector<ProfilePoint>{{1.0, 1}, {5.0, 2}}));
  EXPECT_EQ(b.points, (std::vector<ProfilePoint>{{2.0, 3}}));
  // Best: per-problem minima {1, 2, 2}.
  EXPECT_EQ(s.virtual_best.points, (std::vector<ProfilePoint>{{1.0, 1}, {2.0, 3}}));
  EXPECT_EQ(s.virtual_best.count_at(2.0), 3);
  // Worst: maxima {2, 5, -}; p3 is not solved by A.
  EXPECT_EQ(s.virtual_worst.points, (std::vector<ProfilePoint>{{2.0, 1}, {5.0, 2}}));
  EXPECT_EQ(s.virtual_worst.count_at(5.0), 2);
  expect_dominance(s);
}

TEST(Profile, SingleBackendIsItsOwnEnvelope) {
  const auto s = performance_profile({rec("p1", "A", 3.0), rec("p2", "A", 1.0), rec("p3", "A", 9.0, Status::Diverged)});
  ASSERT_EQ(s.backends.size(), 1u);
  EXPECT_EQ(s.virtual_best.points, s.backends[0].points);
  EXPECT_EQ(s.virtual_worst.points, s.backends[0].points);
}

TEST(Profile, NothingSolved) {
  const auto s = performance_profile(
      {rec("p1", "A", 3.0, Status::Diverged), rec("p1", "B", 1.0, Status::TimeLimit)}, 5);
  EXPECT_EQ(s.total_problems, 5);
  for (const auto& c : s.backends) EXPECT_TRUE(c.points.empty());
  EXPECT_TRUE(s.virtual_best.points.empty());
  EXPECT_TRUE(s.virtual_worst.points.empty());
}

TEST(Profile, AcceptableCountsAsSolved) {
  const auto s = performance_profile({rec("p1", "A", 3.0, Status::Acceptable)});
  EXPECT_EQ(s.backends[0].count_at(3.0), 1);
}

TEST(Profile, TiesAreIncludedAtTheThreshold) {
  const auto s = performance_profile({rec("p1", "A", 2.0), rec("p2", "A", 2.0), rec("p3", "A", 4.0)});
  EXPECT_EQ(s.backends[0].points, (std::vector<ProfilePoint>{{2.0, 2}, {4.0, 3}}));
}

TEST(Profile, InconsistentProblemSetsRejected) {
  EXPECT_THROW(performance_profile({rec("p1", "A", 1.0), rec("p2", "A", 1.0), rec("p1", "B", 1.0)}), InvalidInput);
  EXPECT_THROW(performance_profile({rec("p1", "A", 1.0), rec("p1", "A", 2.0)}), InvalidInput);
  EXPECT_THROW(performance_profile({rec("p1", "A", 1.0), rec("p2", "A", 1.0)}, 1), InvalidInput);
}

TEST(Profile, RepetitionsAreAveraged) {
  const auto s = performance_profile({rec("p1", "A", 1.0, Status::Optimal, 0), rec("p1", "A", 3.0, Status::Optimal, 1),
                                      rec("p2", "A", 1.0, Status::Optimal, 0),
                                      rec("p2", "A", 1.0, Status::IterationLimit, 1)});
  EXPECT_EQ(s.backends[0].points, (std::vector<ProfilePoint>{{2.0, 1}}));
}

TEST(Profile, WorkerCountsSplitCurves) {
  const auto s = performance_profile({rec("p1", "sparse", 1.0, Status::Optimal, 0, 1),
                                      rec("p1", "sparse", 0.5, Status::Optimal, 0, 4), rec("p1", "dense", 2.0)});
  std::vector<std::string> ids;
  for (const auto& c : s.backends) ids.push_back(c.backend_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"dense", "sparse@1", "sparse@4"}));
}

TEST(Profile, DominanceOnRandomRecordSets) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> secs(0.01, 100.0);
  std::bernoulli_distribution solved(0.7), tie(0.2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RunRecord> records;
    const int nb = 1 + trial % 4, np = 1 + trial % 9;
    for (int b = 0; b < nb; ++b)
      for (int p = 0; p < np; ++p) {
        const double t = tie(rng) ? 1.0 : secs(rng);
        records.push_back(rec("p" + std::to_string(p), "b" + std::to_string(b), t,
                              solved(rng) ? Status::Optimal : Status::IterationLimit));
      }
    const auto s = performance_profile(records);
    expect_dominance(s);
    for (const auto& c : s.backends) {
      for (std::size_t k = 1; k < c.points.size(); ++k) {
        EXPECT_LT(c.points[k - 1].time, c.points[k].time);
        EXPECT_LT(c.points[k - 1].solved, c.points[k].solved);
      }
      if (!c.points.empty()) EXPECT_LE(c.points.back().solved, s.total_problems);
    }
    // Same input, same output.
    const auto again = performance_profile(records);
    for (std::size_t k = 0; k < s.backends.size(); ++k) EXPECT_EQ(s.backends[k].points, again.backends[k].points);
  }
}

TEST(Profile, CsvMatchesDataFileLayout) {
  const auto s = performance_profile(hand_example());
  std::ostringstream os;
  write_profile_csv(os, curve(s, "A"));
  EXPECT_EQ(os.str(), "solve_time,num_problems_solved\n1,1\n5,2\n");
}

TEST(Profile, SvgHasBothPanelsAndEveryCurve) {
  const auto s = performance_profile(hand_example());
  std::ostringstream os;
  write_profile_svg(os, s, {.split = 3.0});
  const auto svg = os.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::size_t paths = 0;
  for (auto pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++paths;
  EXPECT_EQ(paths, 4u);
  for (const char* id : {">A<", ">B<", ">virtual_best<", ">virtual_worst<"}) EXPECT_NE(svg.find(id), std::string::npos);
  EXPECT_THROW(write_profile_svg(os, s, {.split = 0.0}), InvalidInput);
}

TEST(Records, CsvRoundTrip) {
  auto records = hand_example();
  records[2].objective.reset();
  records[0].wall_seconds = 0.1 + 0.2;
  std::stringstream ss;
  write_records_csv(ss, records);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "problem_id,backend_id,workers,status,wall_seconds,iterations,objective,repetition");
  const auto back = read_records_csv(ss);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].problem_id, records[k].problem_id);
    EXPECT_EQ(back[k].backend_id, records[k].backend_id);
    EXPECT_EQ(back[k].status, records[k].status);
    EXPECT_EQ(back[k].wall_seconds, records[k].wall_seconds);
    EXPECT_EQ(back[k].objective, records[k].objective);
    EXPECT_EQ(back[k].repetition, records[k].repetition);
  }
}

TEST(Records, MalformedInputRejected) {
  std::istringstream bad_header("problem,backend\n");
  EXPECT_THROW(read_records_csv(bad_header), InvalidInput);
  std::istringstream bad_status(std::string(kRecordsHeader) + "\np,sparse,1,Great,1,2,3,0\n");
  EXPECT_THROW(read_records_csv(bad_status), InvalidInput);
  std::istringstream short_row(std::string(kRecordsHeader) + "\np,sparse,1\n");
  EXPECT_THROW(read_records_csv(short_row), InvalidInput);
  std::istringstream negative(std::string(kRecordsHeader) + "\np,sparse,1,Optimal,-1,2,3,0\n");
  EXPECT_THROW(read_records_csv(negative), InvalidInput);
}

TEST(RunMatrix, OneRecordPerCell) {
  const std::vector<problems::GeneratedNlp> ps{problems::analytic_a(), problems::analytic_b()};
  const auto records = run_matrix(ps, {{"sparse", 1}, {"dense", 1}}, {});
  ASSERT_EQ(records.size(), 4u);
  for (const auto& r : records) {
    EXPECT_EQ(r.status, Status::Optimal) << r.problem_id << " " << r.backend_id;
    EXPECT_GE(r.wall_seconds, 0.0);
    EXPECT_TRUE(r.timing_reliable);
  }
  EXPECT_TRUE(std::is_sorted(records.begin(), records.end(), canonical_less));
  EXPECT_NEAR(*records[0].objective, 1.0, 1e-6);
}

TEST(RunMatrix, IterationLimitIsNotSolved) {
  ip::SolverOptions opt;
  opt.max_iter = 1;
  const auto records = run_matrix({problems::analytic_c()}, {{"sparse", 1}}, opt);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].status, Status::IterationLimit);
  EXPECT_FALSE(records[0].solved());
}

TEST(RunMatrix, ZeroIterationsLimitsEveryNontrivialCell) {
  ip::SolverOptions opt;
  opt.max_iter = 0;
  std::vector<problems::GeneratedNlp> ps{problems::analytic_a(), problems::analytic_b(), problems::analytic_c(),
                                         problems::gen_boundary_control_2d(3), problems::gen_dist_control_2d(2)};
  for (const auto& r : run_matrix(ps, {{"sparse", 1}, {"dense", 1}}, opt))
    EXPECT_EQ(r.status, Status::IterationLimit) << r.problem_id;
}

TEST(RunMatrix, FailuresBecomeStatuses) {
  const auto records = run_matrix({problems::analytic_d(), problems::analytic_a()}, {{"sparse", 1}}, {}, {},
                                  [](const problems::GeneratedNlp& g, const BackendSpec& b, const ip::SolverOptions& o) {
                                    if (g.id == "analytic-a") throw std::runtime_error("backend crashed");
                                    return solve_cell(g, b, o);
                                  });
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].status, Status::Diverged);
  EXPECT_EQ(records[1].status, Status::DegreesOfFreedomError);
  EXPECT_FALSE(records[1].objective.has_value());
}

TEST(RunMatrix, ConcurrentCellsAreStampedAndAgree) {
  const std::vector<problems::GeneratedNlp> ps{problems::analytic_a(), problems::analytic_b(), problems::analytic_c()};
  MatrixOptions mopt;
  mopt.concurrent = true;
  mopt.cell_threads = 3;
  mopt.repetitions = 2;
  const auto par = run_matrix(ps, {{"sparse", 1}}, {}, mopt);
  const auto seq = run_matrix(ps, {{"sparse", 1}}, {}, {.repetitions = 2});
  ASSERT_EQ(par.size(), 6u);
  for (std::size_t k = 0; k < par.size(); ++k) {
    EXPECT_FALSE(par[k].timing_reliable);
    EXPECT_EQ(par[k].problem_id, seq[k].problem_id);
    EXPECT_EQ(par[k].repetition, seq[k].repetition);
    EXPECT_EQ(par[k].objective, seq[k].objective);
  }
}

TEST(RunMatrix, RejectsEmptyMatrix) {
  EXPECT_THROW(run_matrix({}, {{"sparse", 1}}, {}), InvalidInput);
  EXPECT_THROW(run_matrix({problems::analytic_a()}, {}, {}), InvalidInput);
}

TEST(RunMatrix, BenchedRecordsSatisfyDominance) {
  const std::vector<problems::GeneratedNlp> ps{problems::analytic_a(), problems::analytic_b(), problems::analytic_c(),
                                               problems::analytic_d(), problems::gen_boundary_control_2d(4)};
  const auto s = performance_profile(run_matrix(ps, {{"sparse", 1}, {"dense", 1}}, {}));
  EXPECT_EQ(s.virtual_best.points.back().solved, 4);
  expect_dominance(s);
}

TEST(Calibrate, HandComputedMeans) {
  const std::map<int, std::vector<double>> times{{2, {10, 12}}, {4, {8, 9}}, {6, {9, 9}}};
  const auto res = calibrate({{2, 4, 6}, 2}, [&](int w, int rep) {
    RunRecord r = rec("bc3d-N6", "sparse", times.at(w)[rep], Status::Optimal, rep, w);
    return r;
  });
  ASSERT_EQ(res.entries.size(), 3u);
  EXPECT_EQ(res.entries[0].mean_seconds, 11.0);
  EXPECT_EQ(res.entries[1].mean_seconds, 8.5);
  EXPECT_EQ(res.entries[2].mean_seconds, 9.0);
  EXPECT_EQ(res.entries[0].normalized, 1.0);
  EXPECT_EQ(res.entries[1].normalized, 0.0);
  EXPECT_EQ(res.entries[2].normalized, 0.2);
  EXPECT_EQ(res.best_workers, 4);
  EXPECT_EQ(res.min_mean, 8.5);
  EXPECT_EQ(res.max_mean, 11.0);
  EXPECT_EQ(res.runs.size(), 6u);
}

TEST(Calibrate, SingleCount) {
  const auto res = calibrate({{8}, 3}, [](int w, int rep) { return rec("p", "sparse", 1.0 + rep, Status::Optimal, rep, w); });
  ASSERT_EQ(res.entries.size(), 1u);
  EXPECT_EQ(res.entries[0].normalized, 0.0);
  EXPECT_EQ(res.best_workers, 8);
}

TEST(Calibrate, TiesGoToFewerWorkers) {
  const auto res = calibrate({{6, 2, 4}, 1}, [](int w, int rep) {
    return rec("p", "sparse", w == 6 ? 5.0 : 3.0, Status::Optimal, rep, w);
  });
  EXPECT_EQ(res.best_workers, 2);
}

TEST(Calibrate, UnsolvedRepetitionInvalidatesCount) {
  const auto res = calibrate({{2, 4}, 2}, [](int w, int rep) {
    const bool fail = w == 4 && rep == 1;
    return rec("p", "sparse", w == 4 ? 1.0 : 5.0, fail ? Status::TimeLimit : Status::Optimal, rep, w);
  });
  EXPECT_FALSE(res.entries[1].valid);
  EXPECT_TRUE(std::isnan(res.entries[1].normalized));
  EXPECT_EQ(res.best_workers, 2);
  EXPECT_EQ(res.entries[0].normalized, 0.0);
}

TEST(Calibrate, ArgminMatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> secs(1.0, 2.0);
  std::bernoulli_distribution fail(0.1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RunRecord> raw;
    const auto res = calibrate({{1, 2, 3, 4, 5}, 3}, [&](int w, int rep) {
      raw.push_back(rec("p", "sparse", secs(rng), fail(rng) ? Status::Diverged : Status::Optimal, rep, w));
      return raw.back();
    });
    int best = 0;
    double best_mean = 0;
    for (int w = 1; w <= 5; ++w) {
      double sum = 0;
      bool ok = true;
      for (const auto& r : raw)
        if (r.workers == w) sum += r.wall_seconds, ok = ok && r.solved();
      if (ok && (best == 0 || sum / 3 < best_mean)) best = w, best_mean = sum / 3;
    }
    EXPECT_EQ(res.best_workers, best) << trial;
  }
}

TEST(Calibrate, PaperSweepPreset) {
  const auto plan = paper_sweep();
  EXPECT_EQ(plan.repetitions, 5);
  ASSERT_EQ(plan.worker_counts.size(), 36u);
  EXPECT_EQ(plan.worker_counts.front(), 2);
  EXPECT_EQ(plan.worker_counts.back(), 72);
  for (std::size_t k = 1; k < plan.worker_counts.size(); ++k)
    EXPECT_EQ(plan.worker_counts[k] - plan.worker_counts[k - 1], 2);
}

TEST(Calibrate, RealSolveProducesRawRows) {
  const auto res = calibrate(problems::gen_boundary_control_3d(3), "sparse", {{1, 2}, 2});
  EXPECT_EQ(res.runs.size(), 4u);
  EXPECT_TRUE(res.best_workers == 1 || res.best_workers == 2);
}

TEST(Calibrate, RejectsBadPlans) {
  auto never = [](int, int) -> RunRecord { throw std::logic_error("not reached"); };
  EXPECT_THROW(calibrate({{}, 1}, never), InvalidInput);
  EXPECT_THROW(calibrate({{2}, 0}, never), InvalidInput);
  EXPECT_THROW(calibrate({{0}, 1}, never), InvalidInput);
}
