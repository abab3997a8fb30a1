#ifndef IPBENCH_IP_NLP_HPP
#define IPBENCH_IP_NLP_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ipbench/common.hpp"

namespace ipbench::ip {

// Coordinate-format sparsity pattern. For Hessians only the lower triangle
// (row >= col) is listed.
struct SparsePattern {
  std::vector<Index> rows;
  std::vector<Index> cols;

  Index nnz() const { return static_cast<Index>(rows.size()); }
  void add(Index r, Index c) {
    rows.push_back(r);
    cols.push_back(c);
  }
};

// min f(x)  s.t.  g_l <= g(x) <= g_u,  x_l <= x <= x_u.
// Patterns must not change between evaluations.
class NlpProblem {
 public:
  virtual ~NlpProblem() = default;

  virtual Index num_vars() const = 0;
  virtual Index num_constraints() const = 0;

  virtual std::vector<double> var_lower() const = 0;
  virtual std::vector<double> var_upper() const = 0;
  virtual std::vector<double> con_lower() const = 0;
  virtual std::vector<double> con_upper() const = 0;
  virtual std::vector<double> initial_point() const { return std::vector<double>(num_vars(), 0.0); }

  virtual double objective(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> grad) const = 0;
  virtual void constraints(std::span<const double> x, std::span<double> g) const = 0;

  // Rows index constraints, columns index variables.
  virtual SparsePattern jacobian_pattern() const = 0;
  virtual void jacobian_values(std::span<const double> x, std::span<double> values) const = 0;

  // Lower triangle of obj_factor * Hess f + sum_i y_i Hess g_i.
  virtual SparsePattern hessian_pattern() const = 0;
  virtual void hessian_values(std::span<const double> x, double obj_factor, std::span<const double> y,
                              std::span<double> values) const = 0;
};

inline void validate(const NlpProblem& p) {
  const Index n = p.num_vars(), m = p.num_constraints();
  const auto xl = p.var_lower(), xu = p.var_upper(), gl = p.con_lower(), gu = p.con_upper();
  if (n < 0 || m < 0 || static_cast<Index>(xl.size()) != n || static_cast<Index>(xu.size()) != n ||
      static_cast<Index>(gl.size()) != m || static_cast<Index>(gu.size()) != m ||
      static_cast<Index>(p.initial_point().size()) != n) {
    throw InvalidInput("nlp: bound or starting-point vectors have the wrong length");
  }
  for (Index i = 0; i < n; ++i) {
    if (!(xl[i] <= xu[i])) throw InvalidInput("nlp: variable lower bound exceeds upper bound");
  }
  for (Index i = 0; i < m; ++i) {
    if (!(gl[i] <= gu[i])) throw InvalidInput("nlp: constraint lower bound exceeds upper bound");
  }
  const auto jac = p.jacobian_pattern();
  for (Index k = 0; k < jac.nnz(); ++k) {
    if (jac.rows[k] < 0 || jac.rows[k] >= m || jac.cols[k] < 0 || jac.cols[k] >= n) {
      throw InvalidInput("nlp: Jacobian pattern entry out of range");
    }
  }
  const auto hess = p.hessian_pattern();
  for (Index k = 0; k < hess.nnz(); ++k) {
    if (hess.cols[k] < 0 || hess.rows[k] >= n || hess.rows[k] < hess.cols[k]) {
      throw InvalidInput("nlp: Hessian pattern entry is out of range or above the diagonal");
    }
  }
}

// Problem assembled from closures; handy for small hand-written instances.
class CallbackNlp : public NlpProblem {
 public:
  using Vec = std::span<const double>;

  Index n = 0;
  Index m = 0;
  std::vector<double> xl, xu, gl, gu, x0;
  std::function<double(Vec)> f;
  std::function<void(Vec, std::span<double>)> grad_f;
  std::function<void(Vec, std::span<double>)> g;
  SparsePattern jac;
  std::function<void(Vec, std::span<double>)> jac_values;
  SparsePattern hess;
  std::function<void(Vec, double, Vec, std::span<double>)> hess_values;

  Index num_vars() const override { return n; }
  Index num_constraints() const override { return m; }
  std::vector<double> var_lower() const override { return xl; }
  std::vector<double> var_upper() const override { return xu; }
  std::vector<double> con_lower() const override { return gl; }
  std::vector<double> con_upper() const override { return gu; }
  std::vector<double> initial_point() const override { return x0.empty() ? std::vector<double>(n, 0.0) : x0; }

  double objective(Vec x) const override { return f(x); }
  void gradient(Vec x, std::span<double> out) const override { grad_f(x, out); }
  void constraints(Vec x, std::span<double> out) const override {
    if (m > 0) g(x, out);
  }
  SparsePattern jacobian_pattern() const override { return jac; }
  void jacobian_values(Vec x, std::span<double> out) const override {
    if (jac.nnz() > 0) jac_values(x, out);
  }
  SparsePattern hessian_pattern() const override { return hess; }
  void hessian_values(Vec x, double obj_factor, Vec y, std::span<double> out) const override {
    if (hess.nnz() > 0) hess_values(x, obj_factor, y, out);
  }
};

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_NLP_HPP
