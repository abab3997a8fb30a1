#ifndef IPBENCH_LDL_MULTIFRONTAL_HPP
#define IPBENCH_LDL_MULTIFRONTAL_HPP

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include "ipbench/ldl/front.hpp"
#include "ipbench/ldl/symbolic.hpp"
#include "ipbench/ldl/types.hpp"
#include "ipbench/sparse/scaling.hpp"

namespace ipbench::ldl {

// P_eff (S A S) P_eff^T = L D L^T, with S = diag(scaling).
struct NumericFactorization {
  Index n = 0;
  // Strictly-lower part of the unit lower triangular factor (CSC, rows
  // ascending, positions in elimination order).
  std::vector<Index> l_col_start{0};
  std::vector<Index> l_row_idx;
  std::vector<double> l_values;
  std::vector<DBlock> blocks;
  Permutation effective_perm;
  std::vector<double> scaling;
  Inertia inertia;
  Index delayed_pivots = 0;
  double zero_threshold = 0.0;  // absolute, in scaled units
  std::shared_ptr<const SymCsc> matrix;  // original A, for refinement

  Index l_nnz() const { return l_col_start.back(); }
};

namespace detail {

// Output of one front, kept until the parent has consumed the contribution.
struct FrontResult {
  std::vector<Index> pivots;  // permuted-space indices in elimination order
  std::vector<DBlock> blocks;  // starts relative to `pivots`
  std::vector<Index> l_start{0};
  std::vector<Index> l_rows;  // permuted-space row indices
  std::vector<double> l_values;
  Inertia inertia;
  Index delayed = 0;
  // Contribution block: rows cb_rows (first `delayed` are uneliminated
  // fully-summed columns), dense lower triangle column-major.
  std::vector<Index> cb_rows;
  std::vector<double> cb;
};

class FrontFactorizer {
 public:
  FrontFactorizer(const SymbolicFactorization& sym, std::span<const double> permuted_values,
                  const PivotOptions& opt, double zero_abs, std::vector<FrontResult>& results)
      : sym_(sym), values_(permuted_values), opt_(opt), zero_abs_(zero_abs), results_(results) {}

  // `local` is scratch of size n filled with -1; it is restored on return.
  void process(Index s, std::vector<Index>& local) const {
    FrontResult& out = results_[s];
    const Index first_col = sym_.sn_start[s];
    const Index last_col = sym_.sn_start[s + 1];

    std::vector<Index> rows;
    for (Index p = sym_.sn_child_start[s]; p < sym_.sn_child_start[s + 1]; ++p) {
      const FrontResult& child = results_[sym_.sn_children[p]];
      rows.insert(rows.end(), child.cb_rows.begin(), child.cb_rows.begin() + child.delayed);
    }
    for (Index j = first_col; j < last_col; ++j) rows.push_back(j);
    const Index fully_summed = static_cast<Index>(rows.size());
    rows.insert(rows.end(), sym_.sn_rows.begin() + sym_.sn_row_start[s],
                sym_.sn_rows.begin() + sym_.sn_row_start[s + 1]);
    const Index m = static_cast<Index>(rows.size());
    for (Index i = 0; i < m; ++i) local[rows[i]] = i;

    Front front(m, fully_summed);
    for (Index j = first_col; j < last_col; ++j) {
      const Index lj = local[j];
      for (Index p = sym_.permuted_col_start[j]; p < sym_.permuted_col_start[j + 1]; ++p) {
        front.at(local[sym_.permuted_row_idx[p]], lj) += values_[p];
      }
    }
    // Children are assembled in a fixed order so that the result does not
    // depend on which worker finished first.
    for (Index p = sym_.sn_child_start[s]; p < sym_.sn_child_start[s + 1]; ++p) {
      FrontResult& child = results_[sym_.sn_children[p]];
      const Index mc = static_cast<Index>(child.cb_rows.size());
      for (Index cj = 0; cj < mc; ++cj) {
        const Index lj = local[child.cb_rows[cj]];
        for (Index ci = cj; ci < mc; ++ci) {
          front.at(local[child.cb_rows[ci]], lj) += child.cb[ci + cj * mc];
        }
      }
      child.cb.clear();
      child.cb.shrink_to_fit();
    }
    for (Index i = 0; i < m; ++i) local[rows[i]] = -1;

    FrontElimination elim = factor_front(front, opt_, zero_abs_);
    const Index k = elim.eliminated;
    std::vector<Index> ordered(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) ordered[i] = rows[elim.local_order[i]];

    out.pivots.assign(ordered.begin(), ordered.begin() + k);
    out.blocks = std::move(elim.blocks);
    out.inertia = elim.inertia;
    out.l_start.assign(1, 0);
    for (const DBlock& b : out.blocks) {
      for (int c = 0; c < b.size; ++c) {
        const Index col = b.start + c;
        const Index from = b.size == 2 ? b.start + 2 : col + 1;
        const double* v = front.column(col);
        for (Index i = from; i < m; ++i) {
          if (v[i] != 0.0) {
            out.l_rows.push_back(ordered[i]);
            out.l_values.push_back(v[i]);
          }
        }
        out.l_start.push_back(static_cast<Index>(out.l_rows.size()));
      }
    }
    out.delayed = fully_summed - k;
    out.cb_rows.assign(ordered.begin() + k, ordered.end());
    const Index mc = m - k;
    out.cb.assign(static_cast<std::size_t>(mc * mc), 0.0);
    for (Index j = 0; j < mc; ++j) {
      for (Index i = j; i < mc; ++i) out.cb[i + j * mc] = front.at(k + i, k + j);
    }
  }

 private:
  const SymbolicFactorization& sym_;
  std::span<const double> values_;
  PivotOptions opt_;
  double zero_abs_;
  std::vector<FrontResult>& results_;
};

// Runs fronts bottom-up. With several workers, a front becomes ready once
// all of its children are done; the per-front arithmetic is identical for
// any schedule.
inline void run_fronts(const SymbolicFactorization& sym, const FrontFactorizer& factorizer, int workers) {
  const Index nsn = sym.num_supernodes();
  if (workers <= 1 || nsn <= 1) {
    std::vector<Index> local(static_cast<std::size_t>(sym.n), -1);
    for (Index s = 0; s < nsn; ++s) factorizer.process(s, local);
    return;
  }

  std::vector<Index> pending(static_cast<std::size_t>(nsn));
  std::vector<Index> ready;
  for (Index s = 0; s < nsn; ++s) {
    pending[s] = sym.sn_child_start[s + 1] - sym.sn_child_start[s];
    if (pending[s] == 0) ready.push_back(s);
  }
  std::reverse(ready.begin(), ready.end());
  std::mutex mutex;
  std::condition_variable cv;
  Index remaining = nsn;
  std::exception_ptr error;

  auto worker = [&] {
    std::vector<Index> local(static_cast<std::size_t>(sym.n), -1);
    for (;;) {
      Index s = -1;
      {
        std::unique_lock lock(mutex);
        cv.wait(lock, [&] { return !ready.empty() || remaining == 0 || error; });
        if (remaining == 0 || error) return;
        s = ready.back();
        ready.pop_back();
      }
      try {
        factorizer.process(s, local);
      } catch (...) {
        std::lock_guard lock(mutex);
        error = std::current_exception();
        cv.notify_all();
        return;
      }
      std::lock_guard lock(mutex);
      --remaining;
      const Index parent = sym.sn_parent[s];
      if (parent != EliminationTree::kRoot && --pending[parent] == 0) ready.push_back(parent);
      cv.notify_all();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

inline NumericFactorization factorize(const SymbolicFactorization& sym, const SymCsc& a,
                                      const FactorOptions& options = {}) {
  options.pivot.validate();
  if (!sym.matches(a)) throw InvalidInput("factorize: matrix pattern differs from the analyzed pattern");
  const Index n = a.n;

  NumericFactorization fact;
  fact.n = n;
  fact.matrix = std::make_shared<const SymCsc>(a);
  fact.scaling = options.scale ? sparse::max_scaling(a) : std::vector<double>(static_cast<std::size_t>(n), 1.0);

  std::vector<double> permuted(static_cast<std::size_t>(a.nnz()));
  double max_scaled = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index p = a.col_start[j]; p < a.col_start[j + 1]; ++p) {
      const double v = fact.scaling[a.row_idx[p]] * a.values[p] * fact.scaling[j];
      permuted[sym.entry_map[p]] = v;
      max_scaled = std::max(max_scaled, std::abs(v));
    }
  }
  fact.zero_threshold = options.pivot.zero_pivot_tol * max_scaled;

  std::vector<detail::FrontResult> results(static_cast<std::size_t>(sym.num_supernodes()));
  detail::FrontFactorizer factorizer(sym, permuted, options.pivot, fact.zero_threshold, results);
  detail::run_fronts(sym, factorizer, options.workers);

  // Final elimination order is the concatenation of each front's pivots.
  std::vector<Index> position(static_cast<std::size_t>(n), -1);
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (const auto& r : results) {
    for (Index p : r.pivots) {
      position[p] = static_cast<Index>(order.size());
      order.push_back(p);
    }
    fact.inertia.positive += r.inertia.positive;
    fact.inertia.negative += r.inertia.negative;
    fact.inertia.zero += r.inertia.zero;
    fact.delayed_pivots += r.delayed;
  }
  if (static_cast<Index>(order.size()) != n) {
    throw std::logic_error("factorize: not every pivot was eliminated");
  }
  std::vector<Index> effective(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) effective[k] = sym.perm[order[k]];
  fact.effective_perm = Permutation(std::move(effective));

  fact.l_col_start.assign(static_cast<std::size_t>(n + 1), 0);
  for (const auto& r : results) {
    for (std::size_t c = 0; c < r.pivots.size(); ++c) {
      fact.l_col_start[position[r.pivots[c]] + 1] = r.l_start[c + 1] - r.l_start[c];
    }
  }
  std::partial_sum(fact.l_col_start.begin(), fact.l_col_start.end(), fact.l_col_start.begin());
  fact.l_row_idx.resize(static_cast<std::size_t>(fact.l_col_start.back()));
  fact.l_values.resize(fact.l_row_idx.size());
  std::vector<std::pair<Index, double>> column;
  for (const auto& r : results) {
    for (std::size_t c = 0; c < r.pivots.size(); ++c) {
      const Index k = position[r.pivots[c]];
      column.clear();
      for (Index q = r.l_start[c]; q < r.l_start[c + 1]; ++q) {
        const Index row = position[r.l_rows[q]];
        if (row <= k) throw std::logic_error("factorize: factor entry above the diagonal");
        column.emplace_back(row, r.l_values[q]);
      }
      std::sort(column.begin(), column.end());
      Index dst = fact.l_col_start[k];
      for (const auto& [row, v] : column) {
        fact.l_row_idx[dst] = row;
        fact.l_values[dst++] = v;
      }
    }
    for (const DBlock& b : r.blocks) {
      DBlock g = b;
      g.start = position[r.pivots[b.start]];
      fact.blocks.push_back(g);
    }
  }
  return fact;
}

inline Inertia inertia(const NumericFactorization& fact) { return fact.inertia; }

namespace detail {

// In-place solve of (S^-1 P^T L D L^T P S^-1) x = b for one column.
inline void solve_column(const NumericFactorization& f, std::span<double> x, bool strict) {
  const Index n = f.n;
  const auto& perm = f.effective_perm;
  std::vector<double> w(static_cast<std::size_t>(n));
  double rhs_norm = 0.0;
  for (Index k = 0; k < n; ++k) {
    const Index orig = perm[k];
    w[k] = f.scaling[orig] * x[orig];
    rhs_norm = std::max(rhs_norm, std::abs(w[k]));
  }
  for (Index k = 0; k < n; ++k) {
    const double wk = w[k];
    if (wk == 0.0) continue;
    for (Index p = f.l_col_start[k]; p < f.l_col_start[k + 1]; ++p) w[f.l_row_idx[p]] -= f.l_values[p] * wk;
  }
  const double singular_tol = 1e-10 * rhs_norm;
  for (const DBlock& b : f.blocks) {
    const Index k = b.start;
    if (b.size == 1) {
      if (b.d11 == 0.0) {
        if (strict && std::abs(w[k]) > singular_tol) {
          throw SingularFactorError("solve: right-hand side is inconsistent with a zero pivot");
        }
        w[k] = 0.0;
      } else {
        w[k] /= b.d11;
      }
    } else {
      const double det = b.determinant();
      const double r1 = w[k], r2 = w[k + 1];
      w[k] = (b.d22 * r1 - b.d21 * r2) / det;
      w[k + 1] = (b.d11 * r2 - b.d21 * r1) / det;
    }
  }
  for (Index k = n - 1; k >= 0; --k) {
    double acc = w[k];
    for (Index p = f.l_col_start[k]; p < f.l_col_start[k + 1]; ++p) acc -= f.l_values[p] * w[f.l_row_idx[p]];
    w[k] = acc;
  }
  for (Index k = 0; k < n; ++k) {
    const Index orig = perm[k];
    x[orig] = f.scaling[orig] * w[k];
  }
}

}  // namespace detail

// Solves A x = b for every column of b. Each column is handled
// independently, so a block solve equals the corresponding single solves.
// With `refine`, one step of iterative refinement is applied.
inline DenseMatrix solve(const NumericFactorization& fact, const DenseMatrix& b, bool refine = true) {
  if (b.rows != fact.n) throw InvalidInput("solve: right-hand side has the wrong number of rows");
  DenseMatrix x = b;
  std::vector<double> r(static_cast<std::size_t>(fact.n));
  for (Index c = 0; c < b.cols; ++c) {
    std::span<double> xc(x.col(c), static_cast<std::size_t>(fact.n));
    detail::solve_column(fact, xc, true);
    if (refine && fact.matrix) {
      fact.matrix->multiply(xc, r);
      for (Index i = 0; i < fact.n; ++i) r[i] = b(i, c) - r[i];
      detail::solve_column(fact, r, false);
      for (Index i = 0; i < fact.n; ++i) xc[i] += r[i];
    }
  }
  return x;
}

}  // namespace ipbench::ldl

#endif  // IPBENCH_LDL_MULTIFRONTAL_HPP
