#ifndef IPBENCH_SPARSE_SCALING_HPP
#define IPBENCH_SPARSE_SCALING_HPP

#include <cmath>
#include <vector>

#include "ipbench/sparse/sym_csc.hpp"

namespace ipbench::sparse {

// Symmetric max-norm scaling: s_i = 1 / sqrt(max_j |a_ij|), or 1 for an
// empty row. Every entry of S A S is then bounded by 1 in magnitude.
inline std::vector<double> max_scaling(const SymCsc& a) {
  std::vector<double> row_max(static_cast<std::size_t>(a.n), 0.0);
  for (Index j = 0; j < a.n; ++j) {
    for (Index p = a.col_start[j]; p < a.col_start[j + 1]; ++p) {
      const double v = std::abs(a.values[p]);
      const Index i = a.row_idx[p];
      row_max[i] = std::max(row_max[i], v);
      row_max[j] = std::max(row_max[j], v);
    }
  }
  std::vector<double> s(row_max.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = row_max[i] > 0.0 ? 1.0 / std::sqrt(row_max[i]) : 1.0;
  }
  return s;
}

inline SymCsc apply_scaling(const SymCsc& a, std::span<const double> s) {
  SymCsc out = a;
  for (Index j = 0; j < a.n; ++j) {
    for (Index p = a.col_start[j]; p < a.col_start[j + 1]; ++p) {
      out.values[p] = s[a.row_idx[p]] * a.values[p] * s[j];
    }
  }
  return out;
}

}  // namespace ipbench::sparse

#endif  // IPBENCH_SPARSE_SCALING_HPP
