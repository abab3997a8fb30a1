#ifndef IPBENCH_SPARSE_AMD_HPP
#define IPBENCH_SPARSE_AMD_HPP

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ipbench/sparse/sym_csc.hpp"

namespace ipbench::sparse {

enum class OrderingMethod { Amd, Natural };

namespace detail {

// Approximate minimum degree on the quotient graph. Variables keep two
// adjacency lists (uneliminated neighbours and adjacent elements); an
// eliminated pivot becomes an element whose variable list is its
// reachable set. Degrees are the usual AMD upper bound on external degree.
// Indistinguishable variables are merged into supervariables and elements
// contained in the new pivot element are absorbed aggressively.
class AmdOrdering {
 public:
  explicit AmdOrdering(const SymCsc& a)
      : n_(a.n),
        adj_vars_(static_cast<std::size_t>(a.n)),
        adj_elems_(static_cast<std::size_t>(a.n)),
        elem_vars_(static_cast<std::size_t>(a.n)),
        members_(static_cast<std::size_t>(a.n)),
        weight_(static_cast<std::size_t>(a.n), 1),
        degree_(static_cast<std::size_t>(a.n), 0),
        state_(static_cast<std::size_t>(a.n), State::Variable),
        mark_(static_cast<std::size_t>(a.n), 0),
        w_(static_cast<std::size_t>(a.n), -1),
        initial_degree_(static_cast<std::size_t>(a.n), 0) {
    for (Index j = 0; j < n_; ++j) {
      for (Index i : a.rows_of(j)) {
        if (i == j) continue;
        adj_vars_[i].push_back(j);
        adj_vars_[j].push_back(i);
      }
    }
    for (Index i = 0; i < n_; ++i) {
      auto& v = adj_vars_[i];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      degree_[i] = static_cast<Index>(v.size());
      initial_degree_[i] = degree_[i];
      queue_.insert(key(i));
    }
  }

  std::vector<Index> run() {
    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(n_));
    Index remaining = n_;
    while (!queue_.empty()) {
      const Index p = std::get<2>(*queue_.begin());
      queue_.erase(queue_.begin());
      remaining -= weight_[p];
      eliminate(p, remaining);
      order.push_back(p);
      for (Index m : members_[p]) order.push_back(m);
    }
    return order;
  }

 private:
  enum class State : char { Variable, Merged, Element, Absorbed };

  bool live_variable(Index v) const { return state_[v] == State::Variable; }
  bool live_element(Index e) const { return state_[e] == State::Element; }

  void eliminate(Index p, Index remaining) {
    ++stamp_;
    // Reachable set of p: variable neighbours plus members of adjacent elements.
    std::vector<Index> lp;
    mark_[p] = stamp_;
    for (Index v : adj_vars_[p]) {
      if (live_variable(v) && mark_[v] != stamp_) {
        mark_[v] = stamp_;
        lp.push_back(v);
      }
    }
    for (Index e : adj_elems_[p]) {
      if (!live_element(e)) continue;
      for (Index v : elem_vars_[e]) {
        if (live_variable(v) && mark_[v] != stamp_) {
          mark_[v] = stamp_;
          lp.push_back(v);
        }
      }
      state_[e] = State::Absorbed;
      elem_vars_[e].clear();
      elem_vars_[e].shrink_to_fit();
    }
    std::sort(lp.begin(), lp.end());
    state_[p] = State::Element;
    adj_vars_[p].clear();
    adj_vars_[p].shrink_to_fit();
    adj_elems_[p].clear();
    adj_elems_[p].shrink_to_fit();

    Index lp_weight = 0;
    for (Index v : lp) lp_weight += weight_[v];

    // |L_e \ L_p| for every element touching L_p.
    std::vector<Index> touched;
    for (Index i : lp) {
      for (Index e : adj_elems_[i]) {
        if (!live_element(e) || w_[e] >= 0) continue;
        auto& ev = elem_vars_[e];
        Index outside = 0;
        std::size_t keep = 0;
        for (Index v : ev) {
          if (!live_variable(v)) continue;
          ev[keep++] = v;
          if (mark_[v] != stamp_) outside += weight_[v];
        }
        ev.resize(keep);
        w_[e] = outside;
        touched.push_back(e);
      }
    }
    for (Index e : touched) {
      if (w_[e] == 0) {
        state_[e] = State::Absorbed;
        elem_vars_[e].clear();
      }
    }

    for (Index i : lp) {
      auto& elems = adj_elems_[i];
      std::size_t keep = 0;
      Index element_degree = 0;
      for (Index e : elems) {
        if (!live_element(e)) continue;
        elems[keep++] = e;
        element_degree += w_[e];
      }
      elems.resize(keep);
      elems.push_back(p);

      auto& vars = adj_vars_[i];
      keep = 0;
      Index var_degree = 0;
      for (Index v : vars) {
        if (!live_variable(v) || mark_[v] == stamp_) continue;
        vars[keep++] = v;
        var_degree += weight_[v];
      }
      vars.resize(keep);

      const Index external = lp_weight - weight_[i];
      Index d = var_degree + external + element_degree;
      d = std::min(d, degree_[i] + external);
      d = std::min(d, remaining - weight_[i]);
      queue_.erase(key(i));
      degree_[i] = std::max<Index>(d, 0);
    }
    for (Index e : touched) w_[e] = -1;

    elem_vars_[p] = lp;
    detect_supervariables(lp);

    for (Index i : lp) {
      if (live_variable(i)) queue_.insert(key(i));
    }
  }

  void detect_supervariables(const std::vector<Index>& lp) {
    auto hash = [&](Index i) {
      std::size_t h = 0;
      for (Index v : adj_vars_[i]) h += static_cast<std::size_t>(v) * 2654435761u;
      for (Index e : adj_elems_[i]) h += static_cast<std::size_t>(e) * 40503u + 1u;
      return h;
    };
    std::unordered_map<std::size_t, std::vector<Index>> buckets;
    for (Index i : lp) {
      std::sort(adj_vars_[i].begin(), adj_vars_[i].end());
      std::sort(adj_elems_[i].begin(), adj_elems_[i].end());
      buckets[hash(i)].push_back(i);
    }
    for (Index i : lp) {
      if (!live_variable(i)) continue;
      for (Index j : buckets[hash(i)]) {
        if (j <= i || !live_variable(j)) continue;
        if (adj_vars_[i] != adj_vars_[j] || adj_elems_[i] != adj_elems_[j]) continue;
        weight_[i] += weight_[j];
        degree_[i] = std::max<Index>(degree_[i] - weight_[j], 0);
        weight_[j] = 0;
        state_[j] = State::Merged;
        members_[i].push_back(j);
        members_[i].insert(members_[i].end(), members_[j].begin(), members_[j].end());
        members_[j].clear();
        adj_vars_[j].clear();
        adj_elems_[j].clear();
      }
    }
  }

  Index n_;
  std::vector<std::vector<Index>> adj_vars_;
  std::vector<std::vector<Index>> adj_elems_;
  std::vector<std::vector<Index>> elem_vars_;
  std::vector<std::vector<Index>> members_;
  std::vector<Index> weight_;
  std::vector<Index> degree_;
  std::vector<State> state_;
  std::vector<Index> mark_;
  std::vector<Index> w_;
  std::vector<Index> initial_degree_;
  Index stamp_ = 0;
  // Ties on approximate degree go to the variable that started sparser,
  // which keeps hubs late.
  using Key = std::tuple<Index, Index, Index>;
  Key key(Index i) const { return {degree_[i], initial_degree_[i], i}; }
  std::set<Key> queue_;
};

}  // namespace detail

namespace detail {

// Partner for every column whose diagonal is zero or absent: the unmatched
// neighbour with a nonzero diagonal and the largest coupling, or -1.
inline std::vector<Index> zero_diagonal_partners(const SymCsc& a) {
  const Index n = a.n;
  std::vector<char> zero_diag(static_cast<std::size_t>(n), 1);
  std::vector<std::vector<std::pair<Index, double>>> adj(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const auto rows = a.rows_of(j);
    const auto vals = a.values_of(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Index i = rows[k];
      if (i == j) {
        if (vals[k] != 0.0) zero_diag[j] = 0;
      } else {
        adj[i].push_back({j, vals[k]});
        adj[j].push_back({i, vals[k]});
      }
    }
  }
  std::vector<Index> partner(static_cast<std::size_t>(n), -1);
  for (Index j = 0; j < n; ++j) {
    if (!zero_diag[j]) continue;
    Index best = -1;
    double best_abs = 0.0;
    for (const auto& [i, v] : adj[j]) {
      if (zero_diag[i] || partner[i] != -1 || v == 0.0) continue;
      if (std::abs(v) > best_abs || (std::abs(v) == best_abs && i < best)) {
        best = i;
        best_abs = std::abs(v);
      }
    }
    if (best != -1) {
      partner[j] = best;
      partner[best] = j;
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (partner[j] != -1 && !zero_diag[j]) partner[j] = -1;  // keep the link on the zero side only
  }
  return partner;
}

}  // namespace detail

// Approximate minimum degree order. Columns with a zero diagonal (the
// constraint rows of a KKT matrix) are first matched with a neighbour and
// each pair is ordered as one node, partner first; the pair then lands in
// one front where a 2x2 pivot is available.
inline Permutation fill_reducing_order(const SymCsc& a, OrderingMethod method = OrderingMethod::Amd) {
  if (method == OrderingMethod::Natural) return Permutation::identity(a.n);
  const auto partner = detail::zero_diagonal_partners(a);
  if (std::all_of(partner.begin(), partner.end(), [](Index p) { return p == -1; })) {
    return Permutation(detail::AmdOrdering(a).run());
  }

  const Index n = a.n;
  std::vector<Index> node(static_cast<std::size_t>(n), -1), zero_of_node, lead_of_node;
  for (Index j = 0; j < n; ++j) {
    if (partner[j] != -1) continue;
    node[j] = static_cast<Index>(lead_of_node.size());
    lead_of_node.push_back(j);
    zero_of_node.push_back(-1);
  }
  for (Index j = 0; j < n; ++j) {
    if (partner[j] == -1) continue;
    node[j] = node[partner[j]];
    zero_of_node[node[j]] = j;
  }
  SymTriplet t;
  t.n = static_cast<Index>(lead_of_node.size());
  for (Index v = 0; v < t.n; ++v) t.entries.push_back({v, v, 1.0});
  for (Index j = 0; j < n; ++j) {
    for (Index i : a.rows_of(j)) {
      const Index u = node[i], v = node[j];
      if (u != v) t.entries.push_back({std::max(u, v), std::min(u, v), 1.0});
    }
  }
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index v : detail::AmdOrdering(from_triplets(t)).run()) {
    order.push_back(lead_of_node[v]);
    if (zero_of_node[v] != -1) order.push_back(zero_of_node[v]);
  }
  return Permutation(std::move(order));
}

}  // namespace ipbench::sparse

#endif  // IPBENCH_SPARSE_AMD_HPP
