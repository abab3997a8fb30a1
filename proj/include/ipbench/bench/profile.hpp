#ifndef IPBENCH_BENCH_PROFILE_HPP
#define IPBENCH_BENCH_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ipbench/bench/records.hpp"

namespace ipbench::bench {

struct ProfilePoint {
  double time = 0.0;
  Index solved = 0;

  bool operator==(const ProfilePoint&) const = default;
};

// Right-continuous step function: count(t) is the solved count of the last
// point with time <= t, or 0 before the first point.
struct ProfileCurve {
  std::string backend_id;
  std::vector<ProfilePoint> points;
  Index total_problems = 0;

  Index count_at(double t) const {
    Index c = 0;
    for (const auto& p : points) {
      if (p.time > t) break;
      c = p.solved;
    }
    return c;
  }
};

struct ProfileSet {
  std::vector<ProfileCurve> backends;
  ProfileCurve virtual_best;
  ProfileCurve virtual_worst;
  Index total_problems = 0;
};

// Per-problem time for one backend: repetitions are averaged and the
// problem counts as solved only if every repetition solved it.
struct ProblemOutcome {
  bool solved = false;
  double seconds = 0.0;
};

namespace detail {

inline ProfileCurve curve_from_times(std::string id, std::vector<double> times, Index total) {
  std::sort(times.begin(), times.end());
  ProfileCurve c;
  c.backend_id = std::move(id);
  c.total_problems = total;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Index count = static_cast<Index>(k + 1);
    if (!c.points.empty() && c.points.back().time == times[k]) {
      c.points.back().solved = count;
    } else {
      c.points.push_back({times[k], count});
    }
  }
  return c;
}

}  // namespace detail

// Outcomes keyed by curve label, then problem id. The label is the backend
// id, qualified by the worker count when one backend appears with several.
inline std::map<std::string, std::map<std::string, ProblemOutcome>> aggregate_outcomes(
    const std::vector<RunRecord>& records) {
  std::map<std::string, std::set<int>> workers_of;
  for (const auto& r : records) workers_of[r.backend_id].insert(r.workers);
  auto label = [&](const RunRecord& r) {
    return workers_of[r.backend_id].size() > 1 ? r.backend_id + "@" + std::to_string(r.workers) : r.backend_id;
  };

  struct Acc {
    double sum = 0.0;
    int n = 0;
    bool all_solved = true;
    std::set<int> reps;
  };
  std::map<std::string, std::map<std::string, Acc>> acc;
  for (const auto& r : records) {
    auto& a = acc[label(r)][r.problem_id];
    if (!a.reps.insert(r.repetition).second) {
      throw InvalidInput("duplicate record for " + r.problem_id + " / " + label(r) + " repetition " +
                         std::to_string(r.repetition));
    }
    a.sum += r.wall_seconds;
    ++a.n;
    a.all_solved = a.all_solved && r.solved();
  }
  std::map<std::string, std::map<std::string, ProblemOutcome>> out;
  for (const auto& [lab, per_problem] : acc)
    for (const auto& [pid, a] : per_problem) out[lab][pid] = {a.all_solved, a.sum / a.n};
  return out;
}

// Step functions of solved count against wall time per backend, plus the
// virtual best (fastest solver per problem) and virtual worst (slowest,
// only over problems every backend solved).
inline ProfileSet performance_profile(const std::vector<RunRecord>& records,
                                      std::optional<Index> total = std::nullopt) {
  const auto outcomes = aggregate_outcomes(records);
  std::set<std::string> problems;
  for (const auto& r : records) problems.insert(r.problem_id);
  for (const auto& [lab, per_problem] : outcomes) {
    if (per_problem.size() != problems.size()) {
      throw InvalidInput("backend " + lab + " does not cover the common problem set");
    }
  }
  ProfileSet set;
  set.total_problems = total.value_or(static_cast<Index>(problems.size()));
  if (set.total_problems < static_cast<Index>(problems.size())) {
    throw InvalidInput("total problem count is smaller than the number of distinct problems");
  }

  for (const auto& [lab, per_problem] : outcomes) {
    std::vector<double> times;
    for (const auto& [pid, o] : per_problem)
      if (o.solved) times.push_back(o.seconds);
    set.backends.push_back(detail::curve_from_times(lab, std::move(times), set.total_problems));
  }

  std::vector<double> best, worst;
  for (const auto& pid : problems) {
    std::optional<double> lo, hi;
    bool everyone = !outcomes.empty();
    for (const auto& [lab, per_problem] : outcomes) {
      const auto& o = per_problem.at(pid);
      if (!o.solved) {
        everyone = false;
        continue;
      }
      lo = lo ? std::min(*lo, o.seconds) : o.seconds;
      hi = hi ? std::max(*hi, o.seconds) : o.seconds;
    }
    if (lo) best.push_back(*lo);
    if (everyone) worst.push_back(*hi);
  }
  set.virtual_best = detail::curve_from_times("virtual_best", std::move(best), set.total_problems);
  set.virtual_worst = detail::curve_from_times("virtual_worst", std::move(worst), set.total_problems);
  return set;
}

inline void write_profile_csv(std::ostream& os, const ProfileCurve& c) {
  os << "solve_time,num_problems_solved\n";
  for (const auto& p : c.points) os << format_double(p.time) << ',' << p.solved << '\n';
}

struct SvgOptions {
  // Linear time axis up to `split` seconds, logarithmic beyond.
  double split = 60.0;
  int width = 900;
  int height = 420;
};

namespace detail {

inline std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

// Two panels side by side sharing the count axis: linear time on the left,
// log-scaled time on the right.
inline void write_profile_svg(std::ostream& os, const ProfileSet& set, const SvgOptions& opt = {}) {
  if (!(opt.split > 0.0)) throw InvalidInput("profile split must be positive");
  double t_max = opt.split * 10.0;
  auto extend = [&](const ProfileCurve& c) {
    if (!c.points.empty()) t_max = std::max(t_max, c.points.back().time * 1.1);
  };
  for (const auto& c : set.backends) extend(c);
  extend(set.virtual_best);

  const double left = 60, top = 20, bottom = opt.height - 50.0;
  const double panel_gap = 10;
  const double total_w = opt.width - left - 20 - panel_gap;
  const double lin_w = total_w * 0.3, log_w = total_w - lin_w;
  const double log_x0 = left + lin_w + panel_gap;
  const double y_span = std::max<Index>(set.total_problems, 1);

  auto x_of = [&](double t) {
    if (t <= opt.split) return left + lin_w * std::max(t, 0.0) / opt.split;
    return log_x0 + log_w * std::log10(t / opt.split) / std::log10(t_max / opt.split);
  };
  auto y_of = [&](double count) { return bottom - (bottom - top) * count / y_span; };

  // Step path; the pen lifts across the gap between the panels.
  auto path = [&](const ProfileCurve& c) {
    std::string d = "M" + detail::svg_number(x_of(0.0)) + "," + detail::svg_number(y_of(0));
    double count = 0;
    bool crossed = false;
    auto line_to = [&](double t, double cnt) {
      if (t > opt.split && !crossed) {
        crossed = true;
        d += " L" + detail::svg_number(left + lin_w) + "," + detail::svg_number(y_of(count));
        d += " M" + detail::svg_number(log_x0) + "," + detail::svg_number(y_of(count));
      }
      d += " L" + detail::svg_number(x_of(t)) + "," + detail::svg_number(y_of(count));
      d += " L" + detail::svg_number(x_of(t)) + "," + detail::svg_number(y_of(cnt));
      count = cnt;
    };
    for (const auto& p : c.points) line_to(p.time, static_cast<double>(p.solved));
    line_to(t_max, count);
    return d;
  };

  static const char* const palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                                        "#e6ab02", "#a6761d", "#666666"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << detail::svg_number(lin_w) << "\" height=\""
     << bottom - top << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<rect x=\"" << detail::svg_number(log_x0) << "\" y=\"" << top << "\" width=\"" << detail::svg_number(log_w)
     << "\" height=\"" << bottom - top << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << bottom + 16 << "\">0</text>\n";
  os << "<text x=\"" << detail::svg_number(left + lin_w) << "\" y=\"" << bottom + 16 << "\" text-anchor=\"end\">"
     << format_double(opt.split) << "</text>\n";
  for (double t = opt.split * 10; t <= t_max; t *= 10) {
    os << "<text x=\"" << detail::svg_number(x_of(t)) << "\" y=\"" << bottom + 16 << "\" text-anchor=\"middle\">"
       << format_double(t) << "</text>\n";
  }
  os << "<text x=\"" << detail::svg_number(left + total_w / 2) << "\" y=\"" << opt.height - 10
     << "\" text-anchor=\"middle\">Solution time (seconds)</text>\n";
  os << "<text x=\"" << left - 8 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << set.total_problems
     << "</text>\n";
  os << "<text x=\"" << left - 8 << "\" y=\"" << bottom << "\" text-anchor=\"end\">0</text>\n";
  os << "<text transform=\"translate(16," << (top + bottom) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">Number of problems solved</text>\n";

  auto draw = [&](const ProfileCurve& c, const std::string& colour, bool dashed, int slot) {
    os << "<path d=\"" << path(c) << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\""
       << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    const double ly = bottom - 14.0 * (slot + 1);
    const double lx = log_x0 + log_w - 150;
    os << "<line x1=\"" << detail::svg_number(lx) << "\" y1=\"" << ly << "\" x2=\"" << detail::svg_number(lx + 24)
       << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\""
       << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    os << "<text x=\"" << detail::svg_number(lx + 30) << "\" y=\"" << ly + 4 << "\">" << c.backend_id << "</text>\n";
  };
  int slot = 0;
  draw(set.virtual_worst, "black", false, slot++);
  draw(set.virtual_best, "black", true, slot++);
  for (std::size_t k = 0; k < set.backends.size(); ++k)
    draw(set.backends[k], palette[k % 8], k >= 8, slot++);
  os << "</svg>\n";
}

}  // namespace ipbench::bench

#endif  // IPBENCH_BENCH_PROFILE_HPP
