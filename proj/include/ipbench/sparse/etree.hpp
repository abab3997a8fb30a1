#ifndef IPBENCH_SPARSE_ETREE_HPP
#define IPBENCH_SPARSE_ETREE_HPP

#include <vector>

#include "ipbench/sparse/sym_csc.hpp"

namespace ipbench::sparse {

struct EliminationTree {
  static constexpr Index kRoot = -1;
  std::vector<Index> parent;

  Index size() const { return static_cast<Index>(parent.size()); }
  bool is_root(Index i) const { return parent[i] == kRoot; }
};

// Row-wise view of the strict lower triangle: for each row i, the columns
// j < i holding an entry. Used to walk rows of a lower CSC matrix.
inline void strict_rows(const SymCsc& a, std::vector<Index>& row_start, std::vector<Index>& col_idx) {
  row_start.assign(static_cast<std::size_t>(a.n + 1), 0);
  for (Index j = 0; j < a.n; ++j) {
    for (Index i : a.rows_of(j)) {
      if (i != j) ++row_start[i + 1];
    }
  }
  for (Index i = 0; i < a.n; ++i) row_start[i + 1] += row_start[i];
  col_idx.resize(static_cast<std::size_t>(row_start.back()));
  std::vector<Index> next(row_start.begin(), row_start.end() - 1);
  for (Index j = 0; j < a.n; ++j) {
    for (Index i : a.rows_of(j)) {
      if (i != j) col_idx[next[i]++] = j;
    }
  }
}

// Elimination tree of an already-permuted lower CSC matrix (Liu's algorithm
// with path compression).
inline EliminationTree etree(const SymCsc& c) {
  EliminationTree tree;
  tree.parent.assign(static_cast<std::size_t>(c.n), EliminationTree::kRoot);
  std::vector<Index> ancestor(static_cast<std::size_t>(c.n), EliminationTree::kRoot);
  std::vector<Index> row_start, col_idx;
  strict_rows(c, row_start, col_idx);
  for (Index k = 0; k < c.n; ++k) {
    for (Index p = row_start[k]; p < row_start[k + 1]; ++p) {
      Index i = col_idx[p];
      while (i != EliminationTree::kRoot && i < k) {
        const Index next = ancestor[i];
        ancestor[i] = k;
        if (next == EliminationTree::kRoot) tree.parent[i] = k;
        i = next;
      }
    }
  }
  return tree;
}

// Elimination tree of P A P^T.
inline EliminationTree etree(const SymCsc& a, const Permutation& p) { return etree(permute(a, p)); }

// Depth-first postorder of the forest: post[k] is the node visited k-th.
// Children are visited in ascending order, so every subtree occupies a
// contiguous range that ends at its root.
inline std::vector<Index> postorder(const EliminationTree& t) {
  const Index n = static_cast<Index>(t.parent.size());
  std::vector<Index> head(static_cast<std::size_t>(n), -1), next(static_cast<std::size_t>(n), -1);
  for (Index j = n - 1; j >= 0; --j) {
    const Index p = t.parent[j];
    if (p == EliminationTree::kRoot) continue;
    next[j] = head[p];
    head[p] = j;
  }
  std::vector<Index> post;
  post.reserve(static_cast<std::size_t>(n));
  std::vector<Index> stack;
  for (Index r = 0; r < n; ++r) {
    if (t.parent[r] != EliminationTree::kRoot) continue;
    stack.push_back(r);
    while (!stack.empty()) {
      const Index top = stack.back();
      const Index child = head[top];
      if (child == -1) {
        post.push_back(top);
        stack.pop_back();
      } else {
        head[top] = next[child];
        stack.push_back(child);
      }
    }
  }
  return post;
}

}  // namespace ipbench::sparse

#endif  // IPBENCH_SPARSE_ETREE_HPP
