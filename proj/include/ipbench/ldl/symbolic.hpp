#ifndef IPBENCH_LDL_SYMBOLIC_HPP
#define IPBENCH_LDL_SYMBOLIC_HPP

#include <algorithm>
#include <vector>

#include "ipbench/sparse/etree.hpp"
#include "ipbench/sparse/sym_csc.hpp"

namespace ipbench::ldl {

using sparse::EliminationTree;
using sparse::Permutation;
using sparse::SymCsc;

// Result of the analyze phase. All column and row indices refer to the
// permuted matrix P A P^T unless noted otherwise.
struct SymbolicFactorization {
  Index n = 0;
  Permutation perm;
  EliminationTree tree;
  std::vector<Index> col_counts;  // strictly-lower nonzeros per column of L
  Index predicted_nnz = 0;        // sum of col_counts

  // Supernodes: columns sn_start[s] .. sn_start[s+1]-1.
  std::vector<Index> sn_start;
  std::vector<Index> sn_parent;
  std::vector<Index> sn_child_start;
  std::vector<Index> sn_children;
  std::vector<Index> sn_row_start;  // rows of L below each supernode
  std::vector<Index> sn_rows;

  // Pattern of the input and of P A P^T; entry_map sends an input entry to
  // its slot in the permuted pattern.
  std::vector<Index> input_col_start;
  std::vector<Index> input_row_idx;
  std::vector<Index> permuted_col_start;
  std::vector<Index> permuted_row_idx;
  std::vector<Index> entry_map;

  Index num_supernodes() const { return static_cast<Index>(sn_start.size()) - 1; }

  bool matches(const SymCsc& a) const {
    return a.n == n && a.col_start == input_col_start && a.row_idx == input_row_idx;
  }
};

// Supernodes narrower than this absorb their etree parent column even when
// that stores explicit zeros; small fronts would otherwise keep 2x2 pivot
// partners apart.
inline constexpr Index kDefaultNemin = 16;

// Symbolic phase for the given fill-reducing order. The order is refined
// by an etree postorder, which leaves the fill unchanged.
inline SymbolicFactorization analyze(const SymCsc& a, const Permutation& order, Index nemin = kDefaultNemin) {
  if (order.size() != a.n) throw InvalidInput("analyze: ordering size does not match matrix order");
  if (nemin < 1) throw InvalidInput("analyze: nemin must be at least 1");
  SymbolicFactorization sym;
  sym.n = a.n;
  sym.input_col_start = a.col_start;
  sym.input_row_idx = a.row_idx;

  {
    const auto post = sparse::postorder(sparse::etree(a, order));
    std::vector<Index> p(static_cast<std::size_t>(a.n));
    for (Index k = 0; k < a.n; ++k) p[k] = order[post[k]];
    sym.perm = Permutation(std::move(p));
  }
  const SymCsc c = sparse::permute(a, sym.perm, &sym.entry_map);
  sym.permuted_col_start = c.col_start;
  sym.permuted_row_idx = c.row_idx;
  sym.tree = sparse::etree(c);

  const Index n = a.n;
  const auto& parent = sym.tree.parent;

  std::vector<Index> child_count(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < n; ++j) {
    if (parent[j] != EliminationTree::kRoot) ++child_count[parent[j]];
  }

  // Column structures by merging children into parents. Since
  // parent[j] > j, ascending order visits children first.
  std::vector<std::vector<Index>> structure(static_cast<std::size_t>(n));
  std::vector<std::vector<Index>> pending(static_cast<std::size_t>(n));
  std::vector<Index> mark(static_cast<std::size_t>(n), -1);
  sym.col_counts.assign(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < n; ++j) {
    auto& s = structure[j];
    mark[j] = j;
    for (Index i : c.rows_of(j)) {
      if (mark[i] != j) {
        mark[i] = j;
        s.push_back(i);
      }
    }
    for (Index child : pending[j]) {
      for (Index i : structure[child]) {
        if (mark[i] != j) {
          mark[i] = j;
          s.push_back(i);
        }
      }
    }
    pending[j].clear();
    std::sort(s.begin(), s.end());
    sym.col_counts[j] = static_cast<Index>(s.size());
    if (parent[j] != EliminationTree::kRoot) pending[parent[j]].push_back(j);
  }
  sym.predicted_nnz = 0;
  for (Index cnt : sym.col_counts) sym.predicted_nnz += cnt;

  // Fundamental supernodes, plus chains grown while still narrow. Within a
  // chain every column's structure feeds the next, so the rows below a
  // supernode are those of its last column.
  sym.sn_start.clear();
  for (Index j = 0; j < n; ++j) {
    bool extends = false;
    if (j > 0 && parent[j - 1] == j) {
      const bool fundamental = child_count[j] == 1 && sym.col_counts[j - 1] == sym.col_counts[j] + 1;
      extends = fundamental || j - sym.sn_start.back() < nemin;
    }
    if (!extends) sym.sn_start.push_back(j);
  }
  sym.sn_start.push_back(n);
  const Index nsn = sym.num_supernodes();

  std::vector<Index> sn_of(static_cast<std::size_t>(n));
  for (Index s = 0; s < nsn; ++s) {
    for (Index j = sym.sn_start[s]; j < sym.sn_start[s + 1]; ++j) sn_of[j] = s;
  }
  sym.sn_parent.assign(static_cast<std::size_t>(nsn), EliminationTree::kRoot);
  sym.sn_row_start.assign(static_cast<std::size_t>(nsn + 1), 0);
  for (Index s = 0; s < nsn; ++s) {
    const Index last = sym.sn_start[s + 1] - 1;
    if (parent[last] != EliminationTree::kRoot) sym.sn_parent[s] = sn_of[parent[last]];
    for (Index i : structure[last]) {
      if (i > last) sym.sn_rows.push_back(i);
    }
    sym.sn_row_start[s + 1] = static_cast<Index>(sym.sn_rows.size());
  }

  sym.sn_child_start.assign(static_cast<std::size_t>(nsn + 1), 0);
  for (Index s = 0; s < nsn; ++s) {
    if (sym.sn_parent[s] != EliminationTree::kRoot) ++sym.sn_child_start[sym.sn_parent[s] + 1];
  }
  for (Index s = 0; s < nsn; ++s) sym.sn_child_start[s + 1] += sym.sn_child_start[s];
  sym.sn_children.resize(static_cast<std::size_t>(sym.sn_child_start.back()));
  std::vector<Index> next(sym.sn_child_start.begin(), sym.sn_child_start.end() - 1);
  for (Index s = 0; s < nsn; ++s) {
    if (sym.sn_parent[s] != EliminationTree::kRoot) sym.sn_children[next[sym.sn_parent[s]]++] = s;
  }
  return sym;
}

}  // namespace ipbench::ldl

#endif  // IPBENCH_LDL_SYMBOLIC_HPP
