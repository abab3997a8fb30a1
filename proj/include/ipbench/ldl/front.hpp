#ifndef IPBENCH_LDL_FRONT_HPP
#define IPBENCH_LDL_FRONT_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ipbench/ldl/types.hpp"

namespace ipbench::ldl {

// Dense symmetric frontal matrix, lower triangle stored column-major.
// The first `fully_summed` rows are candidates for elimination; the rest
// are only updated and passed to the parent as a contribution block.
class Front {
 public:
  Front(Index order, Index fully_summed)
      : m_(order), nfs_(fully_summed), a_(static_cast<std::size_t>(order * order), 0.0) {}

  Index order() const { return m_; }
  Index fully_summed() const { return nfs_; }

  double& at(Index r, Index c) { return r >= c ? a_[r + c * m_] : a_[c + r * m_]; }
  double at(Index r, Index c) const { return r >= c ? a_[r + c * m_] : a_[c + r * m_]; }

  // Symmetric interchange of rows/columns i and j.
  void swap(Index i, Index j) {
    if (i == j) return;
    if (i > j) std::swap(i, j);
    std::swap(a_[i + i * m_], a_[j + j * m_]);
    for (Index c = 0; c < i; ++c) std::swap(a_[i + c * m_], a_[j + c * m_]);
    for (Index c = i + 1; c < j; ++c) std::swap(a_[c + i * m_], a_[j + c * m_]);
    for (Index r = j + 1; r < m_; ++r) std::swap(a_[r + i * m_], a_[r + j * m_]);
  }

  double* column(Index c) { return a_.data() + c * m_; }

 private:
  Index m_;
  Index nfs_;
  std::vector<double> a_;
};

// Outcome of one pivot search step.
struct PivotChoice {
  enum class Kind { None, Zero, OneByOne, TwoByTwo } kind = Kind::None;
  Index first = -1;
  Index second = -1;
};

// Partial LDL^T of a front. Eliminated pivots occupy positions 0..k-1 after
// the interchanges recorded in `local_order`; L values overwrite the
// eliminated columns.
struct FrontElimination {
  Index eliminated = 0;
  std::vector<Index> local_order;  // local_order[k] = original local row now at k
  std::vector<DBlock> blocks;      // block starts are local positions
  Inertia inertia;
};

namespace detail {

inline double column_max(const Front& f, Index col, Index from, Index skip_a, Index skip_b) {
  double m = 0.0;
  for (Index r = from; r < f.order(); ++r) {
    if (r == skip_a || r == skip_b) continue;
    m = std::max(m, std::abs(f.at(r, col)));
  }
  return m;
}

inline void eliminate_zero(Front& f, Index k) {
  double* col = f.column(k);
  for (Index i = k + 1; i < f.order(); ++i) col[i] = 0.0;
  col[k] = 0.0;
}

inline void eliminate_1x1(Front& f, Index k, std::vector<double>& work) {
  const Index m = f.order();
  double* ck = f.column(k);
  const double d = ck[k];
  work.assign(ck + k + 1, ck + m);  // original column below the pivot
  for (Index i = k + 1; i < m; ++i) ck[i] /= d;
  for (Index j = k + 1; j < m; ++j) {
    const double wj = work[j - k - 1];
    if (wj == 0.0) continue;
    double* cj = f.column(j);
    for (Index i = j; i < m; ++i) cj[i] -= ck[i] * wj;
  }
}

inline void eliminate_2x2(Front& f, Index k, std::vector<double>& work) {
  const Index m = f.order();
  double* c1 = f.column(k);
  double* c2 = f.column(k + 1);
  const double a = c1[k], b = c1[k + 1], c = c2[k + 1];
  const double det = a * c - b * b;
  const Index rest = m - k - 2;
  work.resize(static_cast<std::size_t>(2 * rest));
  double* w1 = work.data();
  double* w2 = work.data() + rest;
  for (Index i = 0; i < rest; ++i) {
    w1[i] = c1[k + 2 + i];
    w2[i] = c2[k + 2 + i];
  }
  for (Index i = 0; i < rest; ++i) {
    c1[k + 2 + i] = (w1[i] * c - w2[i] * b) / det;
    c2[k + 2 + i] = (w2[i] * a - w1[i] * b) / det;
  }
  for (Index j = 0; j < rest; ++j) {
    const double u1 = w1[j], u2 = w2[j];
    if (u1 == 0.0 && u2 == 0.0) continue;
    double* cj = f.column(k + 2 + j);
    for (Index i = j; i < rest; ++i) {
      cj[k + 2 + i] -= c1[k + 2 + i] * u1 + c2[k + 2 + i] * u2;
    }
  }
}

// Threshold test over the fully-summed candidates k..nfs-1.
inline PivotChoice threshold_search(const Front& f, Index k, const PivotOptions& opt, double zero_abs) {
  const double u = opt.threshold;
  for (Index cand = k; cand < f.fully_summed(); ++cand) {
    const double d = f.at(cand, cand);
    const double colmax = column_max(f, cand, k, cand, -1);
    if (std::max(std::abs(d), colmax) <= zero_abs) return {PivotChoice::Kind::Zero, cand, -1};
    if (std::abs(d) > zero_abs && std::abs(d) >= u * colmax) {
      return {PivotChoice::Kind::OneByOne, cand, -1};
    }
    // Partner: largest entry of the candidate column among fully-summed rows.
    Index partner = -1;
    double best = zero_abs;
    for (Index r = k; r < f.fully_summed(); ++r) {
      if (r == cand) continue;
      const double v = std::abs(f.at(r, cand));
      if (v > best) {
        best = v;
        partner = r;
      }
    }
    if (partner < 0) continue;
    const double a = d, b = f.at(partner, cand), c = f.at(partner, partner);
    const double det = a * c - b * b;
    if (!(det < 0.0)) continue;
    const double cm1 = column_max(f, cand, k, cand, partner);
    const double cm2 = column_max(f, partner, k, cand, partner);
    const double bound = std::abs(det) / u;
    if (std::abs(c) * cm1 + std::abs(b) * cm2 <= bound && std::abs(b) * cm1 + std::abs(a) * cm2 <= bound) {
      return {PivotChoice::Kind::TwoByTwo, cand, partner};
    }
  }
  return {};
}

// Bunch-Kaufman choice at position k when every remaining row is fully
// summed; always yields a pivot. A 2x2 choice has negative determinant.
inline PivotChoice bunch_kaufman_choice(const Front& f, Index k, double zero_abs) {
  constexpr double alpha = 0.6403882032022076;  // (1 + sqrt(17)) / 8
  const double akk = std::abs(f.at(k, k));
  Index r = -1;
  double lambda = 0.0;
  for (Index i = k + 1; i < f.order(); ++i) {
    const double v = std::abs(f.at(i, k));
    if (v > lambda) {
      lambda = v;
      r = i;
    }
  }
  if (std::max(akk, lambda) <= zero_abs) return {PivotChoice::Kind::Zero, k, -1};
  if (akk >= alpha * lambda) return {PivotChoice::Kind::OneByOne, k, -1};
  const double sigma = column_max(f, r, k, r, -1);
  if (akk * sigma >= alpha * lambda * lambda) return {PivotChoice::Kind::OneByOne, k, -1};
  if (std::abs(f.at(r, r)) >= alpha * sigma) return {PivotChoice::Kind::OneByOne, r, -1};
  return {PivotChoice::Kind::TwoByTwo, k, r};
}

inline void count_1x1(Inertia& in, double d) {
  if (d > 0.0) {
    ++in.positive;
  } else if (d < 0.0) {
    ++in.negative;
  } else {
    ++in.zero;
  }
}

}  // namespace detail

// Eliminates as many fully-summed pivots as the threshold rule allows. When
// every row is fully summed (a root front) the remainder is finished with
// Bunch-Kaufman pivoting so that nothing is left over.
inline FrontElimination factor_front(Front& f, const PivotOptions& opt, double zero_abs) {
  FrontElimination out;
  const Index m = f.order();
  const Index nfs = f.fully_summed();
  out.local_order.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) out.local_order[i] = i;
  std::vector<double> work;

  auto interchange = [&](Index i, Index j) {
    if (i == j) return;
    f.swap(i, j);
    std::swap(out.local_order[i], out.local_order[j]);
  };

  Index k = 0;
  while (k < nfs) {
    PivotChoice choice = detail::threshold_search(f, k, opt, zero_abs);
    if (choice.kind == PivotChoice::Kind::None) {
      if (m != nfs) break;
      choice = detail::bunch_kaufman_choice(f, k, zero_abs);
    }
    switch (choice.kind) {
      case PivotChoice::Kind::Zero:
        interchange(k, choice.first);
        detail::eliminate_zero(f, k);
        out.blocks.push_back({k, 1, 0.0, 0.0, 0.0});
        ++out.inertia.zero;
        k += 1;
        break;
      case PivotChoice::Kind::OneByOne: {
        interchange(k, choice.first);
        const double d = f.at(k, k);
        detail::eliminate_1x1(f, k, work);
        out.blocks.push_back({k, 1, d, 0.0, 0.0});
        detail::count_1x1(out.inertia, d);
        k += 1;
        break;
      }
      case PivotChoice::Kind::TwoByTwo: {
        Index first = choice.first, second = choice.second;
        interchange(k, first);
        if (second == k) second = first;
        interchange(k + 1, second);
        const DBlock block{k, 2, f.at(k, k), f.at(k + 1, k), f.at(k + 1, k + 1)};
        detail::eliminate_2x2(f, k, work);
        out.blocks.push_back(block);
        ++out.inertia.positive;
        ++out.inertia.negative;
        k += 2;
        break;
      }
      case PivotChoice::Kind::None:
        break;
    }
  }
  out.eliminated = k;
  return out;
}

}  // namespace ipbench::ldl

#endif  // IPBENCH_LDL_FRONT_HPP
