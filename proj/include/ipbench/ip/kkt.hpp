#ifndef IPBENCH_IP_KKT_HPP
#define IPBENCH_IP_KKT_HPP

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "ipbench/ip/barrier.hpp"
#include "ipbench/sparse/sym_csc.hpp"

namespace ipbench::ip {

using sparse::SymCsc;

// Primal-dual Newton system
//   [ W + Sigma + dw I   J^T   ] [dv]   = - [ grad phi + J^T y ]
//   [ J                 -dc I  ] [dy]       [ c               ]
// stored as the lower triangle over n_aug + m unknowns.
struct KktSystem {
  SymCsc matrix;
  std::vector<double> rhs;
  Index n_aug = 0;
  Index m = 0;
};

// Builds the pattern once and scatters new values into it. The pattern
// always contains the whole diagonal so perturbations never change it.
class KktAssembler {
 public:
  explicit KktAssembler(const StandardForm& sf) : n_aug_(sf.n_aug()), m_(sf.m()) {
    const Index dim = n_aug_ + m_;
    const auto& hr = sf.hess_rows();
    const auto& hc = sf.hess_cols();
    const auto& jr = sf.jac_rows();
    const auto& jc = sf.jac_cols();
    num_hess_ = hr.size();
    num_jac_ = jr.size();

    struct Entry {
      Index col, row;
    };
    std::vector<Entry> entries;
    entries.reserve(num_hess_ + num_jac_ + static_cast<std::size_t>(dim));
    for (std::size_t k = 0; k < num_hess_; ++k) entries.push_back({hc[k], hr[k]});
    for (Index i = 0; i < dim; ++i) entries.push_back({i, i});
    for (std::size_t k = 0; k < num_jac_; ++k) entries.push_back({jc[k], n_aug_ + jr[k]});

    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return entries[a].col != entries[b].col ? entries[a].col < entries[b].col : entries[a].row < entries[b].row;
    });
    slot_.resize(entries.size());
    pattern_.n = dim;
    pattern_.col_start.assign(static_cast<std::size_t>(dim) + 1, 0);
    for (std::size_t t = 0; t < order.size(); ++t) {
      const Entry& e = entries[order[t]];
      const bool fresh = t == 0 || e.col != entries[order[t - 1]].col || e.row != entries[order[t - 1]].row;
      if (fresh) {
        pattern_.row_idx.push_back(e.row);
        ++pattern_.col_start[e.col + 1];
      }
      slot_[order[t]] = static_cast<Index>(pattern_.row_idx.size()) - 1;
    }
    for (Index j = 0; j < dim; ++j) pattern_.col_start[j + 1] += pattern_.col_start[j];
    pattern_.values.assign(pattern_.row_idx.size(), 0.0);
  }

  Index n_aug() const { return n_aug_; }
  Index m() const { return m_; }
  const SymCsc& pattern() const { return pattern_; }

  void assemble(std::span<const double> hess_values, std::span<const double> sigma,
                std::span<const double> jac_values, double delta_w, double delta_c, SymCsc& out) const {
    if (out.n != pattern_.n || out.row_idx.size() != pattern_.row_idx.size()) out = pattern_;
    std::fill(out.values.begin(), out.values.end(), 0.0);
    for (std::size_t k = 0; k < num_hess_; ++k) out.values[slot_[k]] += hess_values[k];
    for (Index i = 0; i < n_aug_; ++i) out.values[slot_[num_hess_ + i]] += sigma[i] + delta_w;
    for (Index i = 0; i < m_; ++i) out.values[slot_[num_hess_ + n_aug_ + i]] -= delta_c;
    const std::size_t jac0 = num_hess_ + static_cast<std::size_t>(n_aug_ + m_);
    for (std::size_t k = 0; k < num_jac_; ++k) out.values[slot_[jac0 + k]] += jac_values[k];
  }

  SymCsc assemble(std::span<const double> hess_values, std::span<const double> sigma,
                  std::span<const double> jac_values, double delta_w, double delta_c) const {
    SymCsc out = pattern_;
    assemble(hess_values, sigma, jac_values, delta_w, delta_c, out);
    return out;
  }

 private:
  Index n_aug_;
  Index m_;
  std::size_t num_hess_ = 0;
  std::size_t num_jac_ = 0;
  SymCsc pattern_;
  std::vector<Index> slot_;
};

inline std::vector<double> kkt_rhs(const StandardForm& sf, std::span<const double> grad_phi,
                                   std::span<const double> jac_values, std::span<const double> y,
                                   std::span<const double> c) {
  const Index n = sf.n_aug(), m = sf.m();
  std::vector<double> rhs(static_cast<std::size_t>(n + m));
  for (Index i = 0; i < n; ++i) rhs[i] = -grad_phi[i];
  for (std::size_t k = 0; k < jac_values.size(); ++k) rhs[sf.jac_cols()[k]] -= jac_values[k] * y[sf.jac_rows()[k]];
  for (Index i = 0; i < m; ++i) rhs[n + i] = -c[i];
  return rhs;
}

// Evaluates the problem at `it` and assembles the perturbed system.
inline KktSystem assemble_kkt(const StandardForm& sf, const Iterate& it, double delta_w, double delta_c) {
  const Index n = sf.n_aug(), m = sf.m();
  const BarrierEval be = barrier_value_grad(sf, it);
  std::vector<double> hv(sf.hess_rows().size()), jv(sf.jac_rows().size()), c(static_cast<std::size_t>(m));
  sf.hessian_values(it.v, it.y, hv);
  sf.jacobian_values(it.v, jv);
  sf.constraints(it.v, c);
  KktSystem sys;
  sys.n_aug = n;
  sys.m = m;
  sys.matrix = KktAssembler(sf).assemble(hv, barrier_sigma(sf, it), jv, delta_w, delta_c);
  sys.rhs = kkt_rhs(sf, be.grad, jv, it.y, c);
  return sys;
}

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_KKT_HPP
