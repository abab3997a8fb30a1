#ifndef IPBENCH_IP_BARRIER_HPP
#define IPBENCH_IP_BARRIER_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "ipbench/ip/standard_form.hpp"

namespace ipbench::ip {

// Primal-dual point of the slack-transformed problem. z_lower[k] pairs with
// the bound lower_idx()[k], z_upper[k] with upper_idx()[k].
struct Iterate {
  std::vector<double> v;
  std::vector<double> y;
  std::vector<double> z_lower;
  std::vector<double> z_upper;
  double mu = 0.1;
};

struct BoundDistances {
  std::vector<double> lower;  // v_i - l_i over lower_idx()
  std::vector<double> upper;  // u_i - v_i over upper_idx()
};

inline BoundDistances bound_distances(const StandardForm& sf, std::span<const double> v) {
  BoundDistances d;
  d.lower.reserve(sf.lower_idx().size());
  d.upper.reserve(sf.upper_idx().size());
  for (Index i : sf.lower_idx()) d.lower.push_back(v[i] - sf.lower()[i]);
  for (Index i : sf.upper_idx()) d.upper.push_back(sf.upper()[i] - v[i]);
  return d;
}

inline bool strictly_interior(const StandardForm& sf, const Iterate& it) {
  const auto d = bound_distances(sf, it.v);
  auto positive = [](const std::vector<double>& w) {
    return std::all_of(w.begin(), w.end(), [](double t) { return t > 0.0; });
  };
  return positive(d.lower) && positive(d.upper) && positive(it.z_lower) && positive(it.z_upper) && it.mu > 0.0;
}

// f - mu * sum log(distance to each finite bound).
inline double barrier_value(const StandardForm& sf, double f, std::span<const double> v, double mu) {
  double phi = f;
  for (Index i : sf.lower_idx()) phi -= mu * std::log(v[i] - sf.lower()[i]);
  for (Index i : sf.upper_idx()) phi -= mu * std::log(sf.upper()[i] - v[i]);
  return phi;
}

inline void barrier_gradient(const StandardForm& sf, std::span<const double> grad_f, std::span<const double> v,
                             double mu, std::span<double> out) {
  std::copy(grad_f.begin(), grad_f.end(), out.begin());
  for (Index i : sf.lower_idx()) out[i] -= mu / (v[i] - sf.lower()[i]);
  for (Index i : sf.upper_idx()) out[i] += mu / (sf.upper()[i] - v[i]);
}

struct BarrierEval {
  double phi = 0.0;
  std::vector<double> grad;
};

inline BarrierEval barrier_value_grad(const StandardForm& sf, const Iterate& it) {
  if (!(it.mu > 0.0)) throw InvalidInput("barrier: mu must be positive");
  const auto d = bound_distances(sf, it.v);
  for (double t : d.lower)
    if (!(t > 0.0)) throw InvalidInput("barrier: iterate is not strictly inside its lower bounds");
  for (double t : d.upper)
    if (!(t > 0.0)) throw InvalidInput("barrier: iterate is not strictly inside its upper bounds");
  BarrierEval e;
  std::vector<double> gf(static_cast<std::size_t>(sf.n_aug()));
  sf.gradient(it.v, gf);
  e.phi = barrier_value(sf, sf.objective(it.v), it.v, it.mu);
  e.grad.resize(gf.size());
  barrier_gradient(sf, gf, it.v, it.mu, e.grad);
  return e;
}

// Diagonal Z/X contribution, summed over both sides of each variable.
inline std::vector<double> barrier_sigma(const StandardForm& sf, const Iterate& it) {
  std::vector<double> sigma(static_cast<std::size_t>(sf.n_aug()), 0.0);
  for (std::size_t k = 0; k < sf.lower_idx().size(); ++k) {
    const Index i = sf.lower_idx()[k];
    sigma[i] += it.z_lower[k] / (it.v[i] - sf.lower()[i]);
  }
  for (std::size_t k = 0; k < sf.upper_idx().size(); ++k) {
    const Index i = sf.upper_idx()[k];
    sigma[i] += it.z_upper[k] / (sf.upper()[i] - it.v[i]);
  }
  return sigma;
}

// dz = mu/d - z - (z/d) dd for one bound at distance d moving by dd.
inline double recover_dz(double mu, double dist, double z, double ddist) { return mu / dist - z - z / dist * ddist; }

struct DualStep {
  std::vector<double> lower;
  std::vector<double> upper;
};

inline DualStep recover_dz(const StandardForm& sf, const Iterate& it, std::span<const double> dv) {
  DualStep dz;
  dz.lower.reserve(it.z_lower.size());
  dz.upper.reserve(it.z_upper.size());
  for (std::size_t k = 0; k < sf.lower_idx().size(); ++k) {
    const Index i = sf.lower_idx()[k];
    dz.lower.push_back(recover_dz(it.mu, it.v[i] - sf.lower()[i], it.z_lower[k], dv[i]));
  }
  for (std::size_t k = 0; k < sf.upper_idx().size(); ++k) {
    const Index i = sf.upper_idx()[k];
    dz.upper.push_back(recover_dz(it.mu, sf.upper()[i] - it.v[i], it.z_upper[k], -dv[i]));
  }
  return dz;
}

inline double fraction_to_boundary_tau(double tau_min, double mu) { return std::max(tau_min, 1.0 - mu); }

// Largest alpha in (0, 1] with dist + alpha * ddist >= (1 - tau) * dist for
// every entry; dist must be positive.
inline double fraction_to_boundary(std::span<const double> dist, std::span<const double> ddist, double tau) {
  double alpha = 1.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (ddist[k] < 0.0) alpha = std::min(alpha, -tau * dist[k] / ddist[k]);
  }
  return alpha;
}

// (alpha_max_primal, alpha_max_dual).
inline std::pair<double, double> fraction_to_boundary(const StandardForm& sf, const Iterate& it,
                                                      std::span<const double> dv, const DualStep& dz, double tau) {
  const auto d = bound_distances(sf, it.v);
  std::vector<double> dd_lower, dd_upper;
  dd_lower.reserve(d.lower.size());
  dd_upper.reserve(d.upper.size());
  for (Index i : sf.lower_idx()) dd_lower.push_back(dv[i]);
  for (Index i : sf.upper_idx()) dd_upper.push_back(-dv[i]);
  const double primal =
      std::min(fraction_to_boundary(d.lower, dd_lower, tau), fraction_to_boundary(d.upper, dd_upper, tau));
  const double dual =
      std::min(fraction_to_boundary(it.z_lower, dz.lower, tau), fraction_to_boundary(it.z_upper, dz.upper, tau));
  return {primal, dual};
}

inline double mu_update(double mu, double tol, double kappa_mu = 0.2, double theta_mu = 1.5) {
  return std::max(tol / 10.0, std::min(kappa_mu * mu, std::pow(mu, theta_mu)));
}

// Constraint block of the second-order correction right-hand side.
inline std::vector<double> soc_constraint_rhs(std::span<const double> c_trial, std::span<const double> c_current,
                                              double alpha) {
  std::vector<double> out(c_trial.begin(), c_trial.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * c_current[i];
  return out;
}

struct KktError {
  double stationarity = 0.0;
  double feasibility = 0.0;
  double complementarity = 0.0;
  double overall = 0.0;
};

// Scaled infinity norms of the perturbed optimality conditions. The dual
// rows are scaled down when the multipliers grow beyond s_max on average.
inline KktError kkt_error(const StandardForm& sf, const Iterate& it, double mu, std::span<const double> grad_f,
                          std::span<const double> c, std::span<const double> jac_values) {
  constexpr double s_max = 100.0;
  const Index n = sf.n_aug(), m = sf.m();
  std::vector<double> r(grad_f.begin(), grad_f.end());
  for (std::size_t k = 0; k < jac_values.size(); ++k) r[sf.jac_cols()[k]] += jac_values[k] * it.y[sf.jac_rows()[k]];
  for (std::size_t k = 0; k < sf.lower_idx().size(); ++k) r[sf.lower_idx()[k]] -= it.z_lower[k];
  for (std::size_t k = 0; k < sf.upper_idx().size(); ++k) r[sf.upper_idx()[k]] += it.z_upper[k];

  double y1 = 0.0, z1 = 0.0;
  for (double t : it.y) y1 += std::abs(t);
  for (double t : it.z_lower) z1 += std::abs(t);
  for (double t : it.z_upper) z1 += std::abs(t);
  const double nz = static_cast<double>(it.z_lower.size() + it.z_upper.size());
  const double s_d = std::max(s_max, (y1 + z1) / std::max(1.0, static_cast<double>(m) + nz)) / s_max;
  const double s_c = std::max(s_max, z1 / std::max(1.0, nz)) / s_max;

  KktError e;
  for (Index i = 0; i < n; ++i) e.stationarity = std::max(e.stationarity, std::abs(r[i]));
  e.stationarity /= s_d;
  for (Index i = 0; i < m; ++i) e.feasibility = std::max(e.feasibility, std::abs(c[i]));
  const auto d = bound_distances(sf, it.v);
  for (std::size_t k = 0; k < d.lower.size(); ++k)
    e.complementarity = std::max(e.complementarity, std::abs(d.lower[k] * it.z_lower[k] - mu));
  for (std::size_t k = 0; k < d.upper.size(); ++k)
    e.complementarity = std::max(e.complementarity, std::abs(d.upper[k] * it.z_upper[k] - mu));
  e.complementarity /= s_c;
  e.overall = std::max({e.stationarity, e.feasibility, e.complementarity});
  return e;
}

inline KktError kkt_error(const StandardForm& sf, const Iterate& it, double mu) {
  std::vector<double> gf(static_cast<std::size_t>(sf.n_aug())), c(static_cast<std::size_t>(sf.m())),
      jv(sf.jac_rows().size());
  sf.gradient(it.v, gf);
  sf.constraints(it.v, c);
  sf.jacobian_values(it.v, jv);
  return kkt_error(sf, it, mu, gf, c, jv);
}

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_BARRIER_HPP
