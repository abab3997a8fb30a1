#ifndef IPBENCH_IP_SOLVER_HPP
#define IPBENCH_IP_SOLVER_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ipbench/ip/barrier.hpp"
#include "ipbench/ip/inertia_correction.hpp"
#include "ipbench/ip/kkt.hpp"
#include "ipbench/ip/line_search.hpp"
#include "ipbench/ip/nlp.hpp"
#include "ipbench/ip/options.hpp"
#include "ipbench/ip/standard_form.hpp"
#include "ipbench/ldl/backend.hpp"

namespace ipbench::ip {

struct NewtonStep {
  std::vector<double> dv;
  std::vector<double> dy;
  CorrectionOutcome correction;
};

namespace detail {

inline double one_norm(std::span<const double> v) {
  double s = 0.0;
  for (double t : v) s += std::abs(t);
  return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Moves `value` at least a small margin inside [l, u].
inline double push_inside(double value, double l, double u, double push, double frac) {
  const bool has_l = std::isfinite(l), has_u = std::isfinite(u);
  if (has_l && has_u) {
    const double pl = std::min(push * std::max(1.0, std::abs(l)), frac * (u - l));
    const double pu = std::min(push * std::max(1.0, std::abs(u)), frac * (u - l));
    return std::clamp(value, l + pl, u - pu);
  }
  if (has_l) return std::max(value, l + push * std::max(1.0, std::abs(l)));
  if (has_u) return std::min(value, u - push * std::max(1.0, std::abs(u)));
  return value;
}

inline Iterate initial_iterate(const StandardForm& sf, const SolverOptions& opt) {
  const NlpProblem& p = sf.problem();
  Iterate it;
  it.mu = opt.mu0;
  it.v.assign(static_cast<std::size_t>(sf.n_aug()), 0.0);
  const auto x0 = p.initial_point();
  for (Index i = 0; i < sf.n(); ++i) {
    it.v[i] = push_inside(x0[i], sf.lower()[i], sf.upper()[i], opt.bound_push, opt.bound_frac);
  }
  if (sf.num_slacks() > 0) {
    std::vector<double> g(static_cast<std::size_t>(sf.m()));
    p.constraints(sf.x_part(it.v), g);
    for (Index r = 0; r < sf.m(); ++r) {
      const Index k = sf.slack_of_row(r);
      if (k >= 0) it.v[k] = push_inside(g[r], sf.lower()[k], sf.upper()[k], opt.bound_push, opt.bound_frac);
    }
  }
  it.y.assign(static_cast<std::size_t>(sf.m()), 0.0);
  for (Index i : sf.lower_idx()) it.z_lower.push_back(opt.mu0 / (it.v[i] - sf.lower()[i]));
  for (Index i : sf.upper_idx()) it.z_upper.push_back(opt.mu0 / (sf.upper()[i] - it.v[i]));
  return it;
}

// Keeps each bound multiplier within a factor of the central value mu/d.
inline void safeguard_duals(const StandardForm& sf, Iterate& it) {
  constexpr double kappa_sigma = 1e10;
  const auto d = bound_distances(sf, it.v);
  for (std::size_t k = 0; k < d.lower.size(); ++k) {
    it.z_lower[k] = std::clamp(it.z_lower[k], it.mu / (kappa_sigma * d.lower[k]), kappa_sigma * it.mu / d.lower[k]);
  }
  for (std::size_t k = 0; k < d.upper.size(); ++k) {
    it.z_upper[k] = std::clamp(it.z_upper[k], it.mu / (kappa_sigma * d.upper[k]), kappa_sigma * it.mu / d.upper[k]);
  }
}

inline void solve_in_place(const ldl::LinearBackend& backend, std::vector<double>& rhs) {
  backend.solve(rhs, 1);
}

}  // namespace detail

// Factorizes the Newton matrix at `it` with inertia correction and solves
// for the primal and constraint-multiplier steps.
inline NewtonStep inertia_corrected_step(const StandardForm& sf, const Iterate& it, ldl::LinearBackend& backend,
                                         InertiaCorrector& corrector) {
  const Index n = sf.n_aug(), m = sf.m();
  const KktAssembler assembler(sf);
  const BarrierEval be = barrier_value_grad(sf, it);
  std::vector<double> hv(sf.hess_rows().size()), jv(sf.jac_rows().size()), c(static_cast<std::size_t>(m));
  sf.hessian_values(it.v, it.y, hv);
  sf.jacobian_values(it.v, jv);
  sf.constraints(it.v, c);
  const auto sigma = barrier_sigma(sf, it);
  SymCsc matrix = assembler.pattern();
  assembler.assemble(hv, sigma, jv, 0.0, 0.0, matrix);
  backend.analyze(matrix);
  NewtonStep step;
  step.correction = corrector.factorize(
      [&](double dw, double dc) -> const SymCsc& {
        assembler.assemble(hv, sigma, jv, dw, dc, matrix);
        return matrix;
      },
      backend, n, m, it.mu);
  if (!step.correction.accepted) return step;
  auto rhs = kkt_rhs(sf, be.grad, jv, it.y, c);
  detail::solve_in_place(backend, rhs);
  step.dv.assign(rhs.begin(), rhs.begin() + n);
  step.dy.assign(rhs.begin() + n, rhs.end());
  return step;
}

// Barrier interior-point method with inertia-corrected Newton steps and a
// backtracking line search. Problem and option preconditions raise
// InvalidInput; every failure after that is reported through the status.
inline SolveResult solve(const NlpProblem& problem, ldl::LinearBackend& backend, const SolverOptions& opt = {}) {
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  auto seconds_since = [](Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); };
  opt.validate();
  validate(problem);

  SolveResult result;
  auto finish = [&](SolveResult& r) -> SolveResult {
    r.timing.total_seconds = seconds_since(t_start);
    return std::move(r);
  };

  std::optional<StandardForm> sf_storage;
  try {
    sf_storage.emplace(problem);
  } catch (const DegreesOfFreedomError& e) {
    result.status = Status::DegreesOfFreedomError;
    result.message = e.what();
    result.x = problem.initial_point();
    return finish(result);
  }
  const StandardForm& sf = *sf_storage;
  const Index n = sf.n_aug(), m = sf.m();

  // Cached evaluations at the current point.
  double f = 0.0;
  std::vector<double> gf(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(m)), jv(sf.jac_rows().size()),
      hv(sf.hess_rows().size());
  auto timed_eval = [&](auto&& fn) {
    const auto t = Clock::now();
    fn();
    result.timing.function_eval_seconds += seconds_since(t);
  };
  auto evaluate_first_order = [&](std::span<const double> v) {
    timed_eval([&] {
      f = sf.objective(v);
      sf.gradient(v, gf);
      sf.constraints(v, c);
      sf.jacobian_values(v, jv);
    });
  };

  Iterate it = detail::initial_iterate(sf, opt);
  const KktAssembler assembler(sf);
  SymCsc matrix = assembler.pattern();
  InertiaCorrector corrector(opt);
  PairMemory memory;

  auto fill_result = [&](Status status, const KktError& err) {
    result.status = status;
    result.x = sf.x_of(it.v);
    result.slacks = sf.slacks_of(it.v);
    result.y = it.y;
    result.z_lower.assign(static_cast<std::size_t>(sf.n()), 0.0);
    result.z_upper.assign(static_cast<std::size_t>(sf.n()), 0.0);
    for (std::size_t k = 0; k < sf.lower_idx().size(); ++k)
      if (sf.lower_idx()[k] < sf.n()) result.z_lower[sf.lower_idx()[k]] = it.z_lower[k];
    for (std::size_t k = 0; k < sf.upper_idx().size(); ++k)
      if (sf.upper_idx()[k] < sf.n()) result.z_upper[sf.upper_idx()[k]] = it.z_upper[k];
    result.objective = f;
    result.kkt_error = err.overall;
    result.mu = it.mu;
    result.delta_w_last = corrector.last_delta_w();
  };

  // The ordering pairs constraint rows with primal columns by magnitude, so
  // it is computed from the Newton matrix at the starting point.
  try {
    evaluate_first_order(it.v);
    timed_eval([&] { sf.hessian_values(it.v, it.y, hv); });
    assembler.assemble(hv, barrier_sigma(sf, it), jv, 0.0, 0.0, matrix);
    const auto t = Clock::now();
    backend.analyze(matrix);
    result.timing.linear_solve_seconds += seconds_since(t);
  } catch (const std::exception& e) {
    evaluate_first_order(it.v);
    fill_result(Status::LinearSolveError, kkt_error(sf, it, 0.0, gf, c, jv));
    result.message = e.what();
    return finish(result);
  }

  try {
    evaluate_first_order(it.v);
    const double theta_ceiling =
        std::max(kThetaSlack, opt.theta_max_factor * std::max(1.0, detail::one_norm(c)));
    std::vector<double> grad_phi(static_cast<std::size_t>(n)), c_trial(static_cast<std::size_t>(m)),
        v_trial(static_cast<std::size_t>(n));

    for (Index iter = 0;; ++iter) {
      if (!std::isfinite(f) || !std::all_of(c.begin(), c.end(), [](double t) { return std::isfinite(t); })) {
        fill_result(Status::Diverged, kkt_error(sf, it, 0.0, gf, c, jv));
        result.message = "non-finite function values";
        return finish(result);
      }

      KktError err_mu = kkt_error(sf, it, it.mu, gf, c, jv);
      while (err_mu.overall <= opt.kappa_eps * it.mu) {
        const double next = mu_update(it.mu, opt.tol, opt.kappa_mu, opt.theta_mu);
        if (!(next < it.mu)) break;
        it.mu = next;
        memory.reset();
        err_mu = kkt_error(sf, it, it.mu, gf, c, jv);
      }
      const KktError err = kkt_error(sf, it, 0.0, gf, c, jv);
      result.iterations = iter;
      if (err.overall <= opt.tol) {
        fill_result(Status::Optimal, err);
        return finish(result);
      }
      const bool out_of_iters = iter >= opt.max_iter;
      const bool out_of_time = seconds_since(t_start) > opt.time_limit;
      if (out_of_iters || out_of_time) {
        fill_result(err.overall <= opt.acceptable_tol ? Status::Acceptable
                    : out_of_iters                    ? Status::IterationLimit
                                                      : Status::TimeLimit,
                    err);
        return finish(result);
      }

      // Newton matrix with inertia correction.
      timed_eval([&] { sf.hessian_values(it.v, it.y, hv); });
      const auto sigma = barrier_sigma(sf, it);
      CorrectionOutcome corr;
      {
        const auto t = Clock::now();
        corr = corrector.factorize(
            [&](double dw, double dc) -> const SymCsc& {
              assembler.assemble(hv, sigma, jv, dw, dc, matrix);
              return matrix;
            },
            backend, n, m, it.mu);
        result.timing.linear_solve_seconds += seconds_since(t);
      }
      if (!corr.accepted) {
        fill_result(Status::LinearSolveError, err);
        result.message = "inertia correction failed: delta_w exceeded its cap";
        return finish(result);
      }
      if (corr.delta_w > 0.0) ++result.inertia_corrections;

      barrier_gradient(sf, gf, it.v, it.mu, grad_phi);
      const std::vector<double> rhs_top = [&] {
        auto r = kkt_rhs(sf, grad_phi, jv, it.y, c);
        r.resize(static_cast<std::size_t>(n));
        return r;
      }();
      auto solve_with = [&](std::span<const double> c_block, std::vector<double>& dv, std::vector<double>& dy) {
        std::vector<double> rhs(rhs_top);
        rhs.resize(static_cast<std::size_t>(n + m));
        for (Index i = 0; i < m; ++i) rhs[n + i] = -c_block[i];
        const auto t = Clock::now();
        detail::solve_in_place(backend, rhs);
        result.timing.linear_solve_seconds += seconds_since(t);
        dv.assign(rhs.begin(), rhs.begin() + n);
        dy.assign(rhs.begin() + n, rhs.end());
      };
      std::vector<double> dv, dy;
      solve_with(c, dv, dy);
      DualStep dz = recover_dz(sf, it, dv);

      const double tau = fraction_to_boundary_tau(opt.tau_min, it.mu);
      auto [alpha_max, alpha_dual] = fraction_to_boundary(sf, it, dv, dz, tau);

      const LineSearchPoint current{detail::one_norm(c), barrier_value(sf, f, it.v, it.mu)};
      double slope = detail::dot(grad_phi, dv);
      auto trial_at = [&](const std::vector<double>& dir, double alpha) {
        for (Index i = 0; i < n; ++i) v_trial[i] = it.v[i] + alpha * dir[i];
        LineSearchPoint p;
        timed_eval([&] {
          const double ft = sf.objective(v_trial);
          sf.constraints(v_trial, c_trial);
          p.theta = detail::one_norm(c_trial);
          p.phi = barrier_value(sf, ft, v_trial, it.mu);
        });
        return p;
      };

      double tiny = 0.0;
      for (Index i = 0; i < n; ++i) tiny = std::max(tiny, std::abs(dv[i]) / (1.0 + std::abs(it.v[i])));
      const bool tiny_step = tiny < 10.0 * std::numeric_limits<double>::epsilon();

      // Full step first; if it is rejected, one second-order correction,
      // then plain backtracking from alpha_max / 2.
      LineSearchResult ls;
      bool used_soc = false;
      if (tiny_step) {
        ls.accepted = true;
        ls.alpha = alpha_max;
      } else {
        const LineSearchPoint full = trial_at(dv, alpha_max);
        if (acceptable_trial(current, full, alpha_max, slope, memory, theta_ceiling)) {
          ls.accepted = true;
          ls.alpha = alpha_max;
          ls.point = full;
        } else if (opt.second_order_correction) {
          const auto c_soc = soc_constraint_rhs(c_trial, c, alpha_max);
          std::vector<double> dv_soc, dy_soc;
          solve_with(c_soc, dv_soc, dy_soc);
          DualStep dz_soc = recover_dz(sf, it, dv_soc);
          const auto [a_soc, a_soc_dual] = fraction_to_boundary(sf, it, dv_soc, dz_soc, tau);
          const LineSearchPoint p = trial_at(dv_soc, a_soc);
          if (acceptable_trial(current, p, a_soc, detail::dot(grad_phi, dv_soc), memory, theta_ceiling)) {
            ls.accepted = true;
            ls.alpha = a_soc;
            ls.point = p;
            used_soc = true;
            dv = std::move(dv_soc);
            dy = std::move(dy_soc);
            dz = std::move(dz_soc);
            alpha_dual = a_soc_dual;
          }
        }
        if (!ls.accepted) {
          ls = backtrack([&](double a) { return trial_at(dv, a); }, current, 0.5 * alpha_max, slope, memory,
                         opt.max_backtracks - 1, theta_ceiling);
          ls.backtracks += 1;
        }
      }
      if (!ls.accepted) {
        fill_result(Status::Diverged, err);
        result.message = "line search failed; feasibility restoration would be required";
        return finish(result);
      }

      IterationLog log;
      log.iteration = iter;
      log.mu = it.mu;
      log.objective = f;
      log.infeasibility = current.theta;
      log.kkt_error = err.overall;
      log.delta_w = corr.delta_w;
      log.delta_c = corr.delta_c;
      log.alpha_primal = ls.alpha;
      log.alpha_dual = alpha_dual;
      log.backtracks = ls.backtracks;
      log.second_order = used_soc;
      log.inertia = corr.inertia;
      result.history.push_back(log);

      memory.add(current.theta, current.phi);
      for (Index i = 0; i < n; ++i) it.v[i] += ls.alpha * dv[i];
      for (Index i = 0; i < m; ++i) it.y[i] += ls.alpha * dy[i];
      for (std::size_t k = 0; k < it.z_lower.size(); ++k) it.z_lower[k] += alpha_dual * dz.lower[k];
      for (std::size_t k = 0; k < it.z_upper.size(); ++k) it.z_upper[k] += alpha_dual * dz.upper[k];
      detail::safeguard_duals(sf, it);
      evaluate_first_order(it.v);
    }
  } catch (const ldl::SingularFactorError& e) {
    fill_result(Status::LinearSolveError, kkt_error(sf, it, 0.0, gf, c, jv));
    result.message = e.what();
  } catch (const std::exception& e) {
    fill_result(Status::Diverged, kkt_error(sf, it, 0.0, gf, c, jv));
    result.message = e.what();
  }
  return finish(result);
}

inline SolveResult solve(const NlpProblem& problem, const std::string& backend, const SolverOptions& opt = {},
                         std::optional<int> workers = std::nullopt) {
  auto b = ldl::make_backend(backend, ldl::resolve_workers(workers), opt.pivot);
  return solve(problem, *b, opt);
}

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_SOLVER_HPP
