#ifndef IPBENCH_BENCH_RECORDS_HPP
#define IPBENCH_BENCH_RECORDS_HPP

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "ipbench/common.hpp"
#include "ipbench/ip/options.hpp"

namespace ipbench::bench {

struct RunRecord {
  std::string problem_id;
  std::string backend_id;
  int workers = 1;
  ip::Status status = ip::Status::Diverged;
  double wall_seconds = 0.0;
  Index iterations = 0;
  std::optional<double> objective;
  int repetition = 0;
  // Cleared when cells ran concurrently; not persisted.
  bool timing_reliable = true;

  bool solved() const { return ip::is_solved(status); }
};

inline constexpr const char* kRecordsHeader =
    "problem_id,backend_id,workers,status,wall_seconds,iterations,objective,repetition";

inline bool canonical_less(const RunRecord& a, const RunRecord& b) {
  return std::tie(a.problem_id, a.backend_id, a.workers, a.repetition) <
         std::tie(b.problem_id, b.backend_id, b.workers, b.repetition);
}

inline void sort_canonical(std::vector<RunRecord>& records) {
  std::stable_sort(records.begin(), records.end(), canonical_less);
}

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  for (char ch : line) {
    if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw InvalidInput(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

inline void check_field(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\n\r") != std::string::npos) {
    throw InvalidInput(std::string("record ") + what + " must be nonempty and free of commas");
  }
}

}  // namespace detail

inline void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kRecordsHeader << '\n';
  for (const auto& r : records) {
    detail::check_field(r.problem_id, "problem_id");
    detail::check_field(r.backend_id, "backend_id");
    os << r.problem_id << ',' << r.backend_id << ',' << r.workers << ',' << ip::to_string(r.status) << ','
       << format_double(r.wall_seconds) << ',' << r.iterations << ','
       << (r.objective ? format_double(*r.objective) : std::string()) << ',' << r.repetition << '\n';
  }
}

inline std::vector<RunRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("records file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw InvalidInput("unexpected records header: " + line);
  std::vector<RunRecord> out;
  Index lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 8) throw InvalidInput("line " + std::to_string(lineno) + ": expected 8 fields");
    RunRecord r;
    r.problem_id = f[0];
    r.backend_id = f[1];
    detail::check_field(r.problem_id, "problem_id");
    detail::check_field(r.backend_id, "backend_id");
    r.workers = detail::parse_number<int>(f[2], "workers");
    const auto status = ip::parse_status(f[3]);
    if (!status) throw InvalidInput("line " + std::to_string(lineno) + ": unknown status '" + f[3] + "'");
    r.status = *status;
    r.wall_seconds = detail::parse_number<double>(f[4], "wall_seconds");
    if (!(r.wall_seconds >= 0.0)) throw InvalidInput("line " + std::to_string(lineno) + ": negative wall_seconds");
    r.iterations = detail::parse_number<Index>(f[5], "iterations");
    if (!f[6].empty()) r.objective = detail::parse_number<double>(f[6], "objective");
    r.repetition = detail::parse_number<int>(f[7], "repetition");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ipbench::bench

#endif  // IPBENCH_BENCH_RECORDS_HPP
