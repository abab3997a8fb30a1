#ifndef IPBENCH_PROBLEMS_ANALYTIC_HPP
#define IPBENCH_PROBLEMS_ANALYTIC_HPP

#include <memory>
#include <string>
#include <vector>

#include "ipbench/ip/nlp.hpp"
#include "ipbench/problems/census.hpp"

namespace ipbench::problems {

namespace detail {

inline GeneratedNlp wrap_analytic(const std::string& name, std::shared_ptr<ip::CallbackNlp> p) {
  GeneratedNlp g;
  g.kind = "analytic-" + name;
  g.id = g.kind;
  g.census = measure_census(*p);
  g.problem = std::move(p);
  return g;
}

}  // namespace detail

// min x  s.t.  x >= 1
inline GeneratedNlp analytic_a() {
  auto p = std::make_shared<ip::CallbackNlp>();
  p->n = 1;
  p->xl = {1.0};
  p->xu = {kInf};
  p->f = [](auto x) { return x[0]; };
  p->grad_f = [](auto, auto g) { g[0] = 1.0; };
  auto g = detail::wrap_analytic("a", p);
  g.expected_objective = 1.0;
  g.expected_x = {1.0};
  g.expected_status = ip::Status::Optimal;
  return g;
}

// min (x - 2)^2 / 2  s.t.  0 <= x <= 10
inline GeneratedNlp analytic_b() {
  auto p = std::make_shared<ip::CallbackNlp>();
  p->n = 1;
  p->xl = {0.0};
  p->xu = {10.0};
  p->f = [](auto x) { return 0.5 * (x[0] - 2.0) * (x[0] - 2.0); };
  p->grad_f = [](auto x, auto g) { g[0] = x[0] - 2.0; };
  p->hess.add(0, 0);
  p->hess_values = [](auto, double of, auto, auto v) { v[0] = of; };
  auto g = detail::wrap_analytic("b", p);
  g.expected_objective = 0.0;
  g.expected_x = {2.0};
  g.expected_status = ip::Status::Optimal;
  return g;
}

// min x1 + x2  s.t.  x1 x2 = 1,  x >= 0
inline GeneratedNlp analytic_c() {
  auto p = std::make_shared<ip::CallbackNlp>();
  p->n = 2;
  p->m = 1;
  p->xl = {0.0, 0.0};
  p->xu = {kInf, kInf};
  p->gl = {1.0};
  p->gu = {1.0};
  p->x0 = {2.0, 1.0};
  p->f = [](auto x) { return x[0] + x[1]; };
  p->grad_f = [](auto, auto g) { g[0] = g[1] = 1.0; };
  p->g = [](auto x, auto out) { out[0] = x[0] * x[1]; };
  p->jac.add(0, 0);
  p->jac.add(0, 1);
  p->jac_values = [](auto x, auto v) {
    v[0] = x[1];
    v[1] = x[0];
  };
  p->hess.add(1, 0);
  p->hess_values = [](auto, double, auto y, auto v) { v[0] = y[0]; };
  auto g = detail::wrap_analytic("c", p);
  g.expected_objective = 2.0;
  g.expected_x = {1.0, 1.0};
  g.expected_status = ip::Status::Optimal;
  return g;
}

// Two variables, three equality rows: more equalities than free variables.
inline GeneratedNlp analytic_d() {
  auto p = std::make_shared<ip::CallbackNlp>();
  p->n = 2;
  p->m = 3;
  p->xl = {-kInf, -kInf};
  p->xu = {kInf, kInf};
  p->gl = {1.0, 0.0, 1.5};
  p->gu = p->gl;
  p->f = [](auto x) { return x[0] * x[0] + x[1] * x[1]; };
  p->grad_f = [](auto x, auto g) {
    g[0] = 2.0 * x[0];
    g[1] = 2.0 * x[1];
  };
  p->g = [](auto x, auto out) {
    out[0] = x[0] + x[1];
    out[1] = x[0] - x[1];
    out[2] = x[0] + 2.0 * x[1];
  };
  const double coeffs[3][2] = {{1, 1}, {1, -1}, {1, 2}};
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 2; ++c) p->jac.add(r, c);
  p->jac_values = [coeffs](auto, auto v) {
    for (int k = 0; k < 6; ++k) v[k] = coeffs[k / 2][k % 2];
  };
  p->hess.add(0, 0);
  p->hess.add(1, 1);
  p->hess_values = [](auto, double of, auto, auto v) { v[0] = v[1] = 2.0 * of; };
  auto g = detail::wrap_analytic("d", p);
  g.expected_status = ip::Status::DegreesOfFreedomError;
  return g;
}

inline std::vector<GeneratedNlp> analytic_suite() { return {analytic_a(), analytic_b(), analytic_c(), analytic_d()}; }

}  // namespace ipbench::problems

#endif  // IPBENCH_PROBLEMS_ANALYTIC_HPP
