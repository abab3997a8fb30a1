#ifndef IPBENCH_IP_OPTIONS_HPP
#define IPBENCH_IP_OPTIONS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipbench/common.hpp"
#include "ipbench/ldl/types.hpp"

namespace ipbench::ip {

struct SolverOptions {
  double tol = 1e-8;
  double acceptable_tol = 1e-8;
  Index max_iter = 9999;
  double time_limit = 14400.0;
  double mu0 = 0.1;
  double kappa_mu = 0.2;
  double theta_mu = 1.5;
  double kappa_eps = 10.0;
  double tau_min = 0.99;
  double delta_w0 = 1e-4;
  double delta_w_growth = 8.0;
  double delta_w_first_growth = 100.0;
  // Restart value for delta_w is last_successful * this factor.
  double delta_w_decrease = 1.0 / 3.0;
  double delta_w_min = 1e-20;
  double delta_w_max = 1e40;
  double delta_c_coeff = 1e-8;
  double delta_c_exponent = 0.25;
  double bound_push = 1e-2;
  double bound_frac = 1e-2;
  int max_backtracks = 30;
  // Infeasibility ceiling for barrier-decrease steps, relative to
  // max(1, ||c(x0)||_1).
  double theta_max_factor = 1e4;
  bool second_order_correction = true;
  ldl::PivotOptions pivot;

  void validate() const {
    const bool positive = tol > 0 && acceptable_tol > 0 && time_limit > 0 && mu0 > 0 && kappa_mu > 0 &&
                          theta_mu > 0 && kappa_eps > 0 && tau_min > 0 && delta_w0 > 0 && delta_w_growth > 0 &&
                          delta_w_first_growth > 0 && delta_c_coeff > 0 && bound_push > 0 && bound_frac > 0;
    if (!positive || max_iter < 0 || max_backtracks < 1) throw InvalidInput("solver options must be positive");
    if (!(kappa_mu < 1.0 && theta_mu > 1.0)) throw InvalidInput("solver options need kappa_mu < 1 < theta_mu");
    if (tau_min >= 1.0) throw InvalidInput("solver options need tau_min < 1");
    if (delta_w_growth <= 1.0 || delta_w_first_growth <= 1.0) {
      throw InvalidInput("solver options need delta_w growth factors above 1");
    }
    pivot.validate();
  }
};

enum class Status { Optimal, Acceptable, IterationLimit, TimeLimit, DegreesOfFreedomError, LinearSolveError, Diverged };

inline constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Acceptable: return "Acceptable";
    case Status::IterationLimit: return "IterationLimit";
    case Status::TimeLimit: return "TimeLimit";
    case Status::DegreesOfFreedomError: return "DegreesOfFreedomError";
    case Status::LinearSolveError: return "LinearSolveError";
    case Status::Diverged: return "Diverged";
  }
  return "Unknown";
}

inline std::optional<Status> parse_status(std::string_view s) {
  for (Status st : {Status::Optimal, Status::Acceptable, Status::IterationLimit, Status::TimeLimit,
                    Status::DegreesOfFreedomError, Status::LinearSolveError, Status::Diverged}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

inline bool is_solved(Status s) { return s == Status::Optimal || s == Status::Acceptable; }

struct Timing {
  double function_eval_seconds = 0.0;
  double linear_solve_seconds = 0.0;
  double total_seconds = 0.0;
};

struct IterationLog {
  Index iteration = 0;
  double mu = 0.0;
  double objective = 0.0;
  double infeasibility = 0.0;  // ||c||_1
  double kkt_error = 0.0;
  double delta_w = 0.0;
  double delta_c = 0.0;
  double alpha_primal = 0.0;
  double alpha_dual = 0.0;
  int backtracks = 0;
  bool second_order = false;
  ldl::Inertia inertia;  // of the factorization the step came from
};

struct SolveResult {
  Status status = Status::Diverged;
  std::string message;
  std::vector<double> x;        // original variables
  std::vector<double> slacks;   // one per inequality row
  std::vector<double> y;        // constraint multipliers
  std::vector<double> z_lower;  // per original variable, 0 where unbounded
  std::vector<double> z_upper;
  Index iterations = 0;
  double objective = 0.0;
  double kkt_error = 0.0;
  double mu = 0.0;
  Timing timing;
  Index inertia_corrections = 0;  // iterations whose step needed delta_w > 0
  double delta_w_last = 0.0;
  std::vector<IterationLog> history;
};

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_OPTIONS_HPP
