#ifndef IPBENCH_LDL_DENSE_HPP
#define IPBENCH_LDL_DENSE_HPP

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ipbench/ldl/front.hpp"
#include "ipbench/ldl/types.hpp"
#include "ipbench/sparse/sym_csc.hpp"

namespace ipbench::ldl {

inline constexpr Index kDefaultDenseLimit = 4000;

// P (S A S) P^T = L D L^T for a dense symmetric matrix, computed with
// Bunch-Kaufman pivoting over the whole matrix.
struct DenseFactorization {
  Index n = 0;
  DenseMatrix l;  // strictly lower part holds L; the rest is unused
  std::vector<DBlock> blocks;
  sparse::Permutation perm;
  std::vector<double> scaling;
  Inertia inertia;
  double zero_threshold = 0.0;
  std::shared_ptr<const DenseMatrix> matrix;
};

inline DenseFactorization dense_factorize(const DenseMatrix& a, const PivotOptions& opt = {},
                                          Index limit = kDefaultDenseLimit, bool scale = true) {
  opt.validate();
  if (a.rows != a.cols) throw InvalidInput("dense factorize: matrix is not square");
  if (a.rows > limit) {
    throw InvalidInput("dense factorize: order " + std::to_string(a.rows) + " exceeds the dense limit " +
                       std::to_string(limit));
  }
  const Index n = a.rows;
  DenseFactorization f;
  f.n = n;
  f.matrix = std::make_shared<const DenseMatrix>(a);
  f.scaling.assign(static_cast<std::size_t>(n), 1.0);
  if (scale) {
    for (Index i = 0; i < n; ++i) {
      double m = 0.0;
      for (Index j = 0; j < n; ++j) m = std::max(m, std::abs(a(i, j)));
      if (m > 0.0) f.scaling[i] = 1.0 / std::sqrt(m);
    }
  }

  Front front(n, n);
  double max_scaled = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const double v = f.scaling[i] * a(i, j) * f.scaling[j];
      front.at(i, j) = v;
      max_scaled = std::max(max_scaled, std::abs(v));
    }
  }
  f.zero_threshold = opt.zero_pivot_tol * max_scaled;

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::vector<double> work;
  Index k = 0;
  while (k < n) {
    const PivotChoice choice = detail::bunch_kaufman_choice(front, k, f.zero_threshold);
    if (choice.first != k) {
      front.swap(k, choice.first);
      std::swap(order[k], order[choice.first]);
    }
    if (choice.kind == PivotChoice::Kind::TwoByTwo) {
      front.swap(k + 1, choice.second);
      std::swap(order[k + 1], order[choice.second]);
      f.blocks.push_back({k, 2, front.at(k, k), front.at(k + 1, k), front.at(k + 1, k + 1)});
      detail::eliminate_2x2(front, k, work);
      ++f.inertia.positive;
      ++f.inertia.negative;
      k += 2;
    } else if (choice.kind == PivotChoice::Kind::Zero) {
      detail::eliminate_zero(front, k);
      f.blocks.push_back({k, 1, 0.0, 0.0, 0.0});
      ++f.inertia.zero;
      k += 1;
    } else {
      const double d = front.at(k, k);
      f.blocks.push_back({k, 1, d, 0.0, 0.0});
      detail::eliminate_1x1(front, k, work);
      detail::count_1x1(f.inertia, d);
      k += 1;
    }
  }

  f.l = DenseMatrix(n, n);
  for (const DBlock& b : f.blocks) {
    for (int c = 0; c < b.size; ++c) {
      const Index col = b.start + c;
      for (Index i = b.start + b.size; i < n; ++i) f.l(i, col) = front.at(i, col);
    }
  }
  f.perm = sparse::Permutation(std::move(order));
  return f;
}

inline Inertia inertia(const DenseFactorization& f) { return f.inertia; }

namespace detail {

inline void dense_solve_column(const DenseFactorization& f, std::span<double> x, bool strict) {
  const Index n = f.n;
  std::vector<double> w(static_cast<std::size_t>(n));
  double rhs_norm = 0.0;
  for (Index k = 0; k < n; ++k) {
    w[k] = f.scaling[f.perm[k]] * x[f.perm[k]];
    rhs_norm = std::max(rhs_norm, std::abs(w[k]));
  }
  for (Index k = 0; k < n; ++k) {
    const double wk = w[k];
    if (wk == 0.0) continue;
    const double* lk = f.l.col(k);
    for (Index i = k + 1; i < n; ++i) w[i] -= lk[i] * wk;
  }
  for (const DBlock& b : f.blocks) {
    const Index k = b.start;
    if (b.size == 1) {
      if (b.d11 == 0.0) {
        if (strict && std::abs(w[k]) > 1e-10 * rhs_norm) {
          throw SingularFactorError("dense solve: right-hand side is inconsistent with a zero pivot");
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
    const double* lk = f.l.col(k);
    double acc = w[k];
    for (Index i = k + 1; i < n; ++i) acc -= lk[i] * w[i];
    w[k] = acc;
  }
  for (Index k = 0; k < n; ++k) x[f.perm[k]] = f.scaling[f.perm[k]] * w[k];
}

}  // namespace detail

inline DenseMatrix solve(const DenseFactorization& f, const DenseMatrix& b, bool refine = true) {
  if (b.rows != f.n) throw InvalidInput("dense solve: right-hand side has the wrong number of rows");
  DenseMatrix x = b;
  std::vector<double> r(static_cast<std::size_t>(f.n));
  for (Index c = 0; c < b.cols; ++c) {
    std::span<double> xc(x.col(c), static_cast<std::size_t>(f.n));
    detail::dense_solve_column(f, xc, true);
    if (refine && f.matrix) {
      const DenseMatrix& a = *f.matrix;
      for (Index i = 0; i < f.n; ++i) r[i] = b(i, c);
      for (Index j = 0; j < f.n; ++j) {
        const double xj = xc[j];
        const double* aj = a.col(j);
        for (Index i = 0; i < f.n; ++i) r[i] -= aj[i] * xj;
      }
      detail::dense_solve_column(f, r, false);
      for (Index i = 0; i < f.n; ++i) xc[i] += r[i];
    }
  }
  return x;
}

}  // namespace ipbench::ldl

#endif  // IPBENCH_LDL_DENSE_HPP
