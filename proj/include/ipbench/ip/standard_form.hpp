#ifndef IPBENCH_IP_STANDARD_FORM_HPP
#define IPBENCH_IP_STANDARD_FORM_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipbench/ip/nlp.hpp"

namespace ipbench::ip {

class DegreesOfFreedomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Slack-transformed problem over v = (x, s):
//   min f(x)  s.t.  c(v) = 0,  v_l <= v <= v_u
// Equality rows give c_i = g_i(x) - g_l,i; every other row gets a slack
// s_k in [g_l,i, g_u,i] and c_i = g_i(x) - s_k.
class StandardForm {
 public:
  // Width of the box a fixed variable is relaxed to.
  static constexpr double kFixedRelax = 1e-8;

  explicit StandardForm(const NlpProblem& p) : p_(&p) {
    validate(p);
    n_ = p.num_vars();
    m_ = p.num_constraints();
    const auto xl = p.var_lower(), xu = p.var_upper(), gl = p.con_lower(), gu = p.con_upper();

    Index equalities = 0;
    slack_of_row_.assign(static_cast<std::size_t>(m_), -1);
    for (Index i = 0; i < m_; ++i) {
      if (gl[i] == gu[i]) {
        ++equalities;
        row_shift_.push_back(gl[i]);
      } else {
        slack_of_row_[i] = n_ + num_slacks_++;
        row_shift_.push_back(0.0);
      }
    }
    Index free_vars = 0;
    for (Index i = 0; i < n_; ++i) free_vars += xl[i] != xu[i];
    if (equalities > free_vars) {
      throw DegreesOfFreedomError("too few degrees of freedom: " + std::to_string(equalities) +
                                  " equality constraints but " + std::to_string(free_vars) + " free variables");
    }

    lower_.assign(xl.begin(), xl.end());
    upper_.assign(xu.begin(), xu.end());
    for (Index i = 0; i < n_; ++i) {
      if (lower_[i] == upper_[i]) {
        const double r = kFixedRelax * std::max(1.0, std::abs(lower_[i]));
        lower_[i] -= r;
        upper_[i] += r;
      }
    }
    for (Index i = 0; i < m_; ++i) {
      if (slack_of_row_[i] >= 0) {
        lower_.push_back(gl[i]);
        upper_.push_back(gu[i]);
      }
    }
    for (Index i = 0; i < n_aug(); ++i) {
      if (std::isfinite(lower_[i])) lower_idx_.push_back(i);
      if (std::isfinite(upper_[i])) upper_idx_.push_back(i);
    }

    const SparsePattern jp = p.jacobian_pattern();
    jac_rows_ = jp.rows;
    jac_cols_ = jp.cols;
    nlp_jac_nnz_ = jp.nnz();
    for (Index i = 0; i < m_; ++i) {
      if (slack_of_row_[i] >= 0) {
        jac_rows_.push_back(i);
        jac_cols_.push_back(slack_of_row_[i]);
      }
    }
    const SparsePattern hp = p.hessian_pattern();
    hess_rows_ = hp.rows;
    hess_cols_ = hp.cols;
  }

  const NlpProblem& problem() const { return *p_; }
  Index n() const { return n_; }
  Index n_aug() const { return n_ + num_slacks_; }
  Index m() const { return m_; }
  Index num_slacks() const { return num_slacks_; }
  // Position of row i's slack in v, or -1 for an equality row.
  Index slack_of_row(Index i) const { return slack_of_row_[i]; }

  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<Index>& lower_idx() const { return lower_idx_; }
  const std::vector<Index>& upper_idx() const { return upper_idx_; }

  const std::vector<Index>& jac_rows() const { return jac_rows_; }
  const std::vector<Index>& jac_cols() const { return jac_cols_; }
  const std::vector<Index>& hess_rows() const { return hess_rows_; }
  const std::vector<Index>& hess_cols() const { return hess_cols_; }

  std::span<const double> x_part(std::span<const double> v) const { return v.first(static_cast<std::size_t>(n_)); }

  double objective(std::span<const double> v) const { return p_->objective(x_part(v)); }

  void gradient(std::span<const double> v, std::span<double> grad) const {
    p_->gradient(x_part(v), grad.first(static_cast<std::size_t>(n_)));
    for (Index i = n_; i < n_aug(); ++i) grad[i] = 0.0;
  }

  void constraints(std::span<const double> v, std::span<double> c) const {
    p_->constraints(x_part(v), c);
    for (Index i = 0; i < m_; ++i) {
      c[i] -= slack_of_row_[i] >= 0 ? v[slack_of_row_[i]] : row_shift_[i];
    }
  }

  // Values in the order of jac_rows()/jac_cols().
  void jacobian_values(std::span<const double> v, std::span<double> values) const {
    p_->jacobian_values(x_part(v), values.first(static_cast<std::size_t>(nlp_jac_nnz_)));
    for (std::size_t k = static_cast<std::size_t>(nlp_jac_nnz_); k < values.size(); ++k) values[k] = -1.0;
  }

  void hessian_values(std::span<const double> v, std::span<const double> y, std::span<double> values) const {
    p_->hessian_values(x_part(v), 1.0, y, values);
  }

  // Split v back into original variables and slacks.
  std::vector<double> x_of(std::span<const double> v) const { return {v.begin(), v.begin() + n_}; }
  std::vector<double> slacks_of(std::span<const double> v) const { return {v.begin() + n_, v.end()}; }

 private:
  const NlpProblem* p_;
  Index n_ = 0;
  Index m_ = 0;
  Index num_slacks_ = 0;
  Index nlp_jac_nnz_ = 0;
  std::vector<Index> slack_of_row_;
  std::vector<double> row_shift_;
  std::vector<double> lower_, upper_;
  std::vector<Index> lower_idx_, upper_idx_;
  std::vector<Index> jac_rows_, jac_cols_;
  std::vector<Index> hess_rows_, hess_cols_;
};

inline StandardForm slack_transform(const NlpProblem& p) { return StandardForm(p); }

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_STANDARD_FORM_HPP
