#ifndef IPBENCH_TESTS_FIXTURES_HPP
#define IPBENCH_TESTS_FIXTURES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "ipbench/ip/solver.hpp"

// Problem builders and finite-difference helpers shared by the suites and
// the acceptance runner.
namespace fixture {

using namespace ipbench;
using namespace ipbench::ip;

inline constexpr double inf = kInf;

// Random point strictly inside the variable bounds; free or one-sided
// components are drawn near the finite side.
inline std::vector<double> random_inside(std::mt19937_64& rng, const ip::NlpProblem& p) {
  std::uniform_real_distribution<double> frac(0.05, 0.95), u(0.0, 2.0);
  const auto lo = p.var_lower(), hi = p.var_upper();
  std::vector<double> x(lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isfinite(lo[i]) && std::isfinite(hi[i])) {
      x[i] = lo[i] + frac(rng) * (hi[i] - lo[i]);
    } else if (std::isfinite(lo[i])) {
      x[i] = lo[i] + u(rng);
    } else if (std::isfinite(hi[i])) {
      x[i] = hi[i] - u(rng);
    } else {
      x[i] = u(rng) - 1.0;
    }
  }
  return x;
}

inline Eigen::MatrixXd dense_jacobian(const ip::NlpProblem& p, std::span<const double> x) {
  const auto pat = p.jacobian_pattern();
  std::vector<double> v(static_cast<std::size_t>(pat.nnz()));
  p.jacobian_values(x, v);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(p.num_constraints(), p.num_vars());
  for (std::size_t k = 0; k < v.size(); ++k) j(pat.rows[k], pat.cols[k]) += v[k];
  return j;
}

inline Eigen::MatrixXd fd_jacobian(const ip::NlpProblem& p, std::vector<double> x, double h) {
  const Index m = p.num_constraints(), n = p.num_vars();
  Eigen::MatrixXd j(m, n);
  std::vector<double> gp(static_cast<std::size_t>(m)), gm(static_cast<std::size_t>(m));
  for (Index c = 0; c < n; ++c) {
    const double x0 = x[c];
    x[c] = x0 + h;
    p.constraints(x, gp);
    x[c] = x0 - h;
    p.constraints(x, gm);
    x[c] = x0;
    for (Index r = 0; r < m; ++r) j(r, c) = (gp[r] - gm[r]) / (2 * h);
  }
  return j;
}

// Gradient of f * obj_factor + y.g, from the first-order callbacks.
inline std::vector<double> lagrangian_gradient(const ip::NlpProblem& p, std::span<const double> x, double of,
                                        std::span<const double> y) {
  std::vector<double> g(static_cast<std::size_t>(p.num_vars()));
  p.gradient(x, g);
  for (auto& t : g) t *= of;
  const auto pat = p.jacobian_pattern();
  std::vector<double> v(static_cast<std::size_t>(pat.nnz()));
  p.jacobian_values(x, v);
  for (std::size_t k = 0; k < v.size(); ++k) g[pat.cols[k]] += y[pat.rows[k]] * v[k];
  return g;
}

inline double max_relative_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
  return worst;
}

// Dense Hessian of the Lagrangian from the lower-triangle callback.
inline Eigen::MatrixXd dense_hessian(const ip::NlpProblem& p, std::span<const double> x, double of,
                                     std::span<const double> y) {
  const auto pat = p.hessian_pattern();
  std::vector<double> hv(static_cast<std::size_t>(pat.nnz()));
  p.hessian_values(x, of, y, hv);
  const Index nv = p.num_vars();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nv, nv);
  for (std::size_t k = 0; k < hv.size(); ++k) {
    h(pat.rows[k], pat.cols[k]) += hv[k];
    if (pat.rows[k] != pat.cols[k]) h(pat.cols[k], pat.rows[k]) += hv[k];
  }
  return h;
}

// Central differences of the Lagrangian gradient.
inline Eigen::MatrixXd fd_hessian(const ip::NlpProblem& p, std::vector<double> x, double of,
                                  std::span<const double> y, double h) {
  const Index nv = p.num_vars();
  Eigen::MatrixXd fd(nv, nv);
  for (Index c = 0; c < nv; ++c) {
    const double x0 = x[c];
    x[c] = x0 + h;
    const auto gp = lagrangian_gradient(p, x, of, y);
    x[c] = x0 - h;
    const auto gm = lagrangian_gradient(p, x, of, y);
    x[c] = x0;
    for (Index r = 0; r < nv; ++r) fd(r, c) = (gp[r] - gm[r]) / (2 * h);
  }
  return fd;
}

// min |x|^2 / 2  s.t.  x1 + x2 = 1,  2 x1 + 2 x2 = 2: consistent but the
// Jacobian has rank one.
inline std::shared_ptr<CallbackNlp> duplicated_row() {
  auto p = std::make_shared<CallbackNlp>();
  p->n = 2;
  p->m = 2;
  p->xl = {-inf, -inf};
  p->xu = {inf, inf};
  p->gl = p->gu = {1.0, 2.0};
  p->f = [](auto x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
  p->grad_f = [](auto x, auto g) {
    g[0] = x[0];
    g[1] = x[1];
  };
  p->g = [](auto x, auto c) {
    c[0] = x[0] + x[1];
    c[1] = 2.0 * (x[0] + x[1]);
  };
  for (Index r = 0; r < 2; ++r)
    for (Index c = 0; c < 2; ++c) p->jac.add(r, c);
  p->jac_values = [](auto, auto v) {
    v[0] = v[1] = 1.0;
    v[2] = v[3] = 2.0;
  };
  p->hess.add(0, 0);
  p->hess.add(1, 1);
  p->hess_values = [](auto, double of, auto, auto v) { v[0] = v[1] = of; };
  return p;
}

// Random smooth problem: separable quartic-plus-exponential objective with
// one coupling term, constraints a_r.x + q_r x_{k_r}^2 / 2, random bounds.
struct RandomProblem {
  std::shared_ptr<CallbackNlp> nlp;
  std::vector<double> d, b, a;  // a is m x n row-major
  double e = 0.0;
  std::vector<double> q;
  std::vector<Index> k;
};

inline RandomProblem random_problem(std::mt19937_64& rng, Index n, Index m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  RandomProblem rp;
  auto p = std::make_shared<CallbackNlp>();
  rp.nlp = p;
  p->n = n;
  p->m = m;
  for (Index i = 0; i < n; ++i) {
    rp.d.push_back(1.0 + u(rng));
    rp.b.push_back(u(rng));
    const double lo = -1.0 - std::abs(u(rng)), hi = 1.0 + std::abs(u(rng));
    switch (kind(rng)) {
      case 0: p->xl.push_back(lo), p->xu.push_back(hi); break;
      case 1: p->xl.push_back(lo), p->xu.push_back(inf); break;
      case 2: p->xl.push_back(-inf), p->xu.push_back(hi); break;
      default: p->xl.push_back(-inf), p->xu.push_back(inf);
    }
  }
  rp.e = n > 1 ? u(rng) : 0.0;
  for (Index r = 0; r < m; ++r) {
    for (Index i = 0; i < n; ++i) rp.a.push_back(u(rng));
    rp.q.push_back(u(rng));
    rp.k.push_back(pick(rng));
    if (kind(rng) == 0) {
      p->gl.push_back(0.1), p->gu.push_back(0.1);
    } else {
      p->gl.push_back(-2.0 - std::abs(u(rng))), p->gu.push_back(kind(rng) == 1 ? inf : 2.0);
    }
  }
  const RandomProblem copy = rp;
  p->f = [copy, n](auto x) {
    double f = 0.0;
    for (Index i = 0; i < n; ++i) f += copy.d[i] * std::pow(x[i], 4) / 4 + copy.b[i] * x[i] + std::exp(0.3 * x[i]);
    if (n > 1) f += copy.e * x[0] * x[1];
    return f;
  };
  p->grad_f = [copy, n](auto x, auto g) {
    for (Index i = 0; i < n; ++i) g[i] = copy.d[i] * std::pow(x[i], 3) + copy.b[i] + 0.3 * std::exp(0.3 * x[i]);
    if (n > 1) {
      g[0] += copy.e * x[1];
      g[1] += copy.e * x[0];
    }
  };
  p->g = [copy, n, m](auto x, auto c) {
    for (Index r = 0; r < m; ++r) {
      c[r] = 0.5 * copy.q[r] * x[copy.k[r]] * x[copy.k[r]];
      for (Index i = 0; i < n; ++i) c[r] += copy.a[r * n + i] * x[i];
    }
  };
  for (Index r = 0; r < m; ++r)
    for (Index i = 0; i < n; ++i) p->jac.add(r, i);
  p->jac_values = [copy, n, m](auto x, auto v) {
    for (Index r = 0; r < m; ++r)
      for (Index i = 0; i < n; ++i) v[r * n + i] = copy.a[r * n + i] + (i == copy.k[r] ? copy.q[r] * x[i] : 0.0);
  };
  for (Index i = 0; i < n; ++i) p->hess.add(i, i);
  if (n > 1) p->hess.add(1, 0);
  p->hess_values = [copy, n, m](auto x, double of, auto y, auto v) {
    for (Index i = 0; i < n; ++i) v[i] = of * (3.0 * copy.d[i] * x[i] * x[i] + 0.09 * std::exp(0.3 * x[i]));
    for (Index r = 0; r < m; ++r) v[copy.k[r]] += y[r] * copy.q[r];
    if (n > 1) v[n] = of * copy.e;
  };
  return rp;
}

// Strictly interior point with random positive duals.
inline Iterate random_iterate(std::mt19937_64& rng, const StandardForm& sf, double mu) {
  std::uniform_real_distribution<double> frac(0.1, 0.9), u(-1.0, 1.0), pos(0.2, 2.0);
  Iterate it;
  it.mu = mu;
  for (Index i = 0; i < sf.n_aug(); ++i) {
    const double l = sf.lower()[i], h = sf.upper()[i];
    if (std::isfinite(l) && std::isfinite(h)) {
      it.v.push_back(l + frac(rng) * (h - l));
    } else if (std::isfinite(l)) {
      it.v.push_back(l + pos(rng));
    } else if (std::isfinite(h)) {
      it.v.push_back(h - pos(rng));
    } else {
      it.v.push_back(u(rng));
    }
  }
  for (Index i = 0; i < sf.m(); ++i) it.y.push_back(u(rng));
  for (std::size_t k = 0; k < sf.lower_idx().size(); ++k) it.z_lower.push_back(pos(rng));
  for (std::size_t k = 0; k < sf.upper_idx().size(); ++k) it.z_upper.push_back(pos(rng));
  return it;
}

inline Iterate point(std::vector<double> v, std::vector<double> y, std::vector<double> zl, std::vector<double> zu, double mu) {
  return Iterate{std::move(v), std::move(y), std::move(zl), std::move(zu), mu};
}

}  // namespace fixture

#endif  // IPBENCH_TESTS_FIXTURES_HPP
