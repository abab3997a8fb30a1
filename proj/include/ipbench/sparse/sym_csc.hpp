#ifndef IPBENCH_SPARSE_SYM_CSC_HPP
#define IPBENCH_SPARSE_SYM_CSC_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ipbench/common.hpp"

namespace ipbench::sparse {

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Lower triangle (row >= col) of a symmetric matrix in coordinate form.
struct SymTriplet {
  Index n = 0;
  std::vector<Triplet> entries;
};

// Lower-triangular compressed-column storage of a symmetric matrix.
// Row indices are strictly increasing within a column and never above the
// diagonal.
struct SymCsc {
  Index n = 0;
  std::vector<Index> col_start{0};
  std::vector<Index> row_idx;
  std::vector<double> values;

  Index nnz() const { return col_start.empty() ? 0 : col_start.back(); }

  std::span<const Index> rows_of(Index j) const {
    return {row_idx.data() + col_start[j], static_cast<std::size_t>(col_start[j + 1] - col_start[j])};
  }
  std::span<const double> values_of(Index j) const {
    return {values.data() + col_start[j], static_cast<std::size_t>(col_start[j + 1] - col_start[j])};
  }

  // Number of stored entries strictly below the diagonal.
  Index strict_lower_nnz() const {
    Index count = 0;
    for (Index j = 0; j < n; ++j) {
      for (Index i : rows_of(j)) count += (i != j);
    }
    return count;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  // y = A x using the implied symmetric matrix.
  void multiply(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (Index j = 0; j < n; ++j) {
      for (Index p = col_start[j]; p < col_start[j + 1]; ++p) {
        const Index i = row_idx[p];
        y[i] += values[p] * x[j];
        if (i != j) y[j] += values[p] * x[i];
      }
    }
  }

  // Infinity norm of the full symmetric matrix.
  double norm_inf() const {
    std::vector<double> row_sum(static_cast<std::size_t>(n), 0.0);
    for (Index j = 0; j < n; ++j) {
      for (Index p = col_start[j]; p < col_start[j + 1]; ++p) {
        const Index i = row_idx[p];
        row_sum[i] += std::abs(values[p]);
        if (i != j) row_sum[j] += std::abs(values[p]);
      }
    }
    double m = 0.0;
    for (double s : row_sum) m = std::max(m, s);
    return m;
  }

  bool same_pattern(const SymCsc& other) const {
    return n == other.n && col_start == other.col_start && row_idx == other.row_idx;
  }
};

inline void validate(const SymTriplet& t) {
  if (t.n < 0) throw InvalidInput("negative matrix order");
  for (const auto& e : t.entries) {
    if (e.row < 0 || e.row >= t.n || e.col < 0 || e.col >= t.n) {
      throw InvalidInput("triplet index out of range: (" + std::to_string(e.row) + ", " +
                         std::to_string(e.col) + ")");
    }
    if (e.row < e.col) {
      throw InvalidInput("upper-triangle triplet: (" + std::to_string(e.row) + ", " +
                         std::to_string(e.col) + ")");
    }
    if (!std::isfinite(e.value)) throw InvalidInput("non-finite triplet value");
  }
}

// Compresses triplets column by column; duplicates are summed.
inline SymCsc from_triplets(const SymTriplet& t) {
  validate(t);
  SymCsc a;
  a.n = t.n;
  a.col_start.assign(static_cast<std::size_t>(t.n + 1), 0);

  std::vector<Index> order(t.entries.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) {
    const auto& a_ = t.entries[l];
    const auto& b_ = t.entries[r];
    return a_.col != b_.col ? a_.col < b_.col : a_.row < b_.row;
  });

  a.row_idx.reserve(order.size());
  a.values.reserve(order.size());
  Index last_row = -1;
  Index last_col = -1;
  for (Index k : order) {
    const auto& e = t.entries[k];
    if (e.row == last_row && e.col == last_col) {
      a.values.back() += e.value;
      continue;
    }
    a.row_idx.push_back(e.row);
    a.values.push_back(e.value);
    ++a.col_start[e.col + 1];
    last_row = e.row;
    last_col = e.col;
  }
  std::partial_sum(a.col_start.begin(), a.col_start.end(), a.col_start.begin());
  return a;
}

// Checks every structural invariant of SymCsc.
inline bool is_valid(const SymCsc& a) {
  if (a.n < 0 || static_cast<Index>(a.col_start.size()) != a.n + 1) return false;
  if (a.col_start.front() != 0) return false;
  if (static_cast<Index>(a.row_idx.size()) != a.nnz() || a.values.size() != a.row_idx.size()) {
    return false;
  }
  for (Index j = 0; j < a.n; ++j) {
    if (a.col_start[j + 1] < a.col_start[j]) return false;
    Index prev = j - 1;
    for (Index i : a.rows_of(j)) {
      if (i <= prev || i >= a.n) return false;
      prev = i;
    }
  }
  return true;
}

// A symmetric permutation: position k of the reordered matrix holds the
// original index p[k].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> p) : p_(std::move(p)) {
    if (!is_bijection(p_)) throw InvalidInput("permutation is not a bijection");
  }

  static Permutation identity(Index n) {
    std::vector<Index> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), Index{0});
    return Permutation(std::move(p));
  }

  static bool is_bijection(std::span<const Index> p) {
    std::vector<char> seen(p.size(), 0);
    for (Index v : p) {
      if (v < 0 || v >= static_cast<Index>(p.size()) || seen[v]) return false;
      seen[v] = 1;
    }
    return true;
  }

  Index size() const { return static_cast<Index>(p_.size()); }
  Index operator[](Index k) const { return p_[k]; }
  const std::vector<Index>& indices() const { return p_; }

  // inverse()[original] = position.
  std::vector<Index> inverse() const {
    std::vector<Index> inv(p_.size());
    for (std::size_t k = 0; k < p_.size(); ++k) inv[p_[k]] = static_cast<Index>(k);
    return inv;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> p_;
};

// Lower triangle of P A P^T. If entry_map is given, entry_map[q] is the
// position in the result of entry q of the input.
inline SymCsc permute(const SymCsc& a, const Permutation& perm, std::vector<Index>* entry_map = nullptr) {
  if (perm.size() != a.n) throw InvalidInput("permutation size does not match matrix order");
  const auto inv = perm.inverse();
  SymCsc c;
  c.n = a.n;
  c.col_start.assign(static_cast<std::size_t>(a.n + 1), 0);
  for (Index j = 0; j < a.n; ++j) {
    for (Index i : a.rows_of(j)) {
      ++c.col_start[std::min(inv[i], inv[j]) + 1];
    }
  }
  std::partial_sum(c.col_start.begin(), c.col_start.end(), c.col_start.begin());
  c.row_idx.resize(static_cast<std::size_t>(a.nnz()));
  c.values.resize(static_cast<std::size_t>(a.nnz()));
  std::vector<Index> next(c.col_start.begin(), c.col_start.end() - 1);
  std::vector<Index> where(static_cast<std::size_t>(a.nnz()));
  for (Index j = 0; j < a.n; ++j) {
    for (Index p = a.col_start[j]; p < a.col_start[j + 1]; ++p) {
      const Index ni = inv[a.row_idx[p]];
      const Index nj = inv[j];
      const Index col = std::min(ni, nj);
      const Index q = next[col]++;
      c.row_idx[q] = std::max(ni, nj);
      c.values[q] = a.values[p];
      where[p] = q;
    }
  }
  // Sort each column by row index, carrying the entry map along.
  std::vector<Index> slot(static_cast<std::size_t>(a.nnz()));
  std::iota(slot.begin(), slot.end(), Index{0});
  std::vector<Index> pos_of_slot(slot.size());
  for (Index j = 0; j < c.n; ++j) {
    auto first = slot.begin() + c.col_start[j];
    auto last = slot.begin() + c.col_start[j + 1];
    std::sort(first, last, [&](Index l, Index r) { return c.row_idx[l] < c.row_idx[r]; });
  }
  std::vector<Index> rows(c.row_idx.size());
  std::vector<double> vals(c.values.size());
  for (std::size_t k = 0; k < slot.size(); ++k) {
    rows[k] = c.row_idx[slot[k]];
    vals[k] = c.values[slot[k]];
    pos_of_slot[slot[k]] = static_cast<Index>(k);
  }
  c.row_idx = std::move(rows);
  c.values = std::move(vals);
  if (entry_map) {
    entry_map->resize(where.size());
    for (std::size_t p = 0; p < where.size(); ++p) (*entry_map)[p] = pos_of_slot[where[p]];
  }
  return c;
}

// Dense symmetric expansion, mostly for tests and the dense backend.
inline DenseMatrix to_dense(const SymCsc& a) {
  DenseMatrix d(a.n, a.n);
  for (Index j = 0; j < a.n; ++j) {
    for (Index p = a.col_start[j]; p < a.col_start[j + 1]; ++p) {
      const Index i = a.row_idx[p];
      d(i, j) = a.values[p];
      d(j, i) = a.values[p];
    }
  }
  return d;
}

// Lower triangle of a dense symmetric matrix; entries with |v| <= drop are skipped
// except on the diagonal.
inline SymCsc from_dense(const DenseMatrix& d, double drop = 0.0) {
  SymTriplet t;
  t.n = d.rows;
  for (Index j = 0; j < d.cols; ++j) {
    for (Index i = j; i < d.rows; ++i) {
      if (i == j || std::abs(d(i, j)) > drop) t.entries.push_back({i, j, d(i, j)});
    }
  }
  return from_triplets(t);
}

}  // namespace ipbench::sparse

#endif  // IPBENCH_SPARSE_SYM_CSC_HPP
