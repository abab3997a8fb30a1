#ifndef IPBENCH_PROBLEMS_PDE_HPP
#define IPBENCH_PROBLEMS_PDE_HPP

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ipbench/ip/nlp.hpp"
#include "ipbench/problems/census.hpp"

namespace ipbench::problems {

// Finite-difference control problems on the unit square/cube with mesh
// width h = 1/(N+1). Derivative patterns come from walkers that visit the
// entries in a fixed order; with an empty point they only report positions.
class StencilNlp : public ip::NlpProblem {
 public:
  using Emit = std::function<void(Index row, Index col, double value)>;

  explicit StencilNlp(Index n) : n_(n), h_(1.0 / static_cast<double>(n + 1)) {
    if (n < 1) throw InvalidInput("grid dimension N must be at least 1");
  }

  Index grid() const { return n_; }
  double mesh_width() const { return h_; }

  virtual void walk_jacobian(std::span<const double> x, const Emit& emit) const = 0;
  virtual void walk_hessian(std::span<const double> x, double obj_factor, std::span<const double> y,
                            const Emit& emit) const = 0;

  ip::SparsePattern jacobian_pattern() const override {
    ip::SparsePattern p;
    walk_jacobian({}, [&](Index r, Index c, double) { p.add(r, c); });
    return p;
  }
  void jacobian_values(std::span<const double> x, std::span<double> values) const override {
    std::size_t k = 0;
    walk_jacobian(x, [&](Index, Index, double v) { values[k++] = v; });
  }
  ip::SparsePattern hessian_pattern() const override {
    ip::SparsePattern p;
    walk_hessian({}, 1.0, {}, [&](Index r, Index c, double) { p.add(r, c); });
    return p;
  }
  void hessian_values(std::span<const double> x, double obj_factor, std::span<const double> y,
                      std::span<double> values) const override {
    std::size_t k = 0;
    walk_hessian(x, obj_factor, y, [&](Index, Index, double v) { values[k++] = v; });
  }

  // Census by visiting the structure without storing it.
  Census enumerate_census() const {
    Census c;
    c.n_vars = num_vars();
    c.n_cons = num_constraints();
    walk_jacobian({}, [&](Index, Index, double) { ++c.jac_nnz; });
    walk_hessian({}, 1.0, {}, [&](Index, Index, double) { ++c.hess_nnz; });
    count_bounds(var_lower(), var_upper(), c);
    return c;
  }

 protected:
  static double at(std::span<const double> x, Index i) { return x.empty() ? 0.0 : x[i]; }

  Index n_;
  double h_;
};

// States on the N^3 interior grid, controls on the 6N^2 boundary faces.
// Each interior node carries the 7-point equation (-Laplace_h y) = d, where
// a neighbor across the boundary is the face control there.
class BoundaryControl3d final : public StencilNlp {
 public:
  static constexpr double kSource = 20.0;
  static constexpr double kAlpha = 0.01;
  static constexpr double kStateUpper = 3.2;
  static constexpr double kControlLower = 1.8;
  static constexpr double kControlUpper = 2.5;

  explicit BoundaryControl3d(Index n) : StencilNlp(n) {}

  static Census formula_census(Index n) {
    Census c;
    c.n_vars = n * n * n + 6 * n * n;
    c.n_cons = n * n * n;
    c.jac_nnz = 7 * n * n * n;
    c.hess_nnz = c.n_vars;
    c.both_bounded = 6 * n * n;
    c.upper_only = n * n * n;
    return c;
  }

  Index num_states() const { return n_ * n_ * n_; }
  Index num_vars() const override { return num_states() + 6 * n_ * n_; }
  Index num_constraints() const override { return num_states(); }

  // Interior node (i, j, k), each in 1..N.
  Index state(Index i, Index j, Index k) const { return (i - 1) + n_ * ((j - 1) + n_ * (k - 1)); }
  // Face 0/1: x1 = 0/1 at (j, k); 2/3: x2 = 0/1 at (i, k); 4/5: x3 = 0/1 at (i, j).
  Index control(int face, Index a, Index b) const { return num_states() + face * n_ * n_ + (a - 1) + n_ * (b - 1); }

  // Variable seen by node (i, j, k) one step along `axis` in direction `dir`.
  Index neighbor(Index i, Index j, Index k, int axis, int dir) const {
    std::array<Index, 3> p{i, j, k};
    p[axis] += dir;
    if (p[axis] == 0 || p[axis] == n_ + 1) {
      const int face = 2 * axis + (dir > 0 ? 1 : 0);
      const Index a = axis == 0 ? j : i;
      const Index b = axis == 2 ? j : k;
      return control(face, a, b);
    }
    return state(p[0], p[1], p[2]);
  }

  double target(Index i, Index j, Index k) const { return 3.0 + 5.0 * (i * h_) * (j * h_) * (k * h_); }

  std::vector<double> var_lower() const override {
    std::vector<double> l(static_cast<std::size_t>(num_vars()), -kInf);
    std::fill(l.begin() + num_states(), l.end(), kControlLower);
    return l;
  }
  std::vector<double> var_upper() const override {
    std::vector<double> u(static_cast<std::size_t>(num_vars()), kStateUpper);
    std::fill(u.begin() + num_states(), u.end(), kControlUpper);
    return u;
  }
  std::vector<double> con_lower() const override { return std::vector<double>(num_states(), kSource); }
  std::vector<double> con_upper() const override { return con_lower(); }

  double objective(std::span<const double> x) const override {
    double track = 0.0, cost = 0.0;
    for_each_node([&](Index i, Index j, Index k) {
      const double d = x[state(i, j, k)] - target(i, j, k);
      track += d * d;
    });
    for (Index c = num_states(); c < num_vars(); ++c) cost += x[c] * x[c];
    return 0.5 * h_ * h_ * h_ * track + 0.5 * kAlpha * h_ * h_ * cost;
  }
  void gradient(std::span<const double> x, std::span<double> g) const override {
    for_each_node([&](Index i, Index j, Index k) {
      const Index s = state(i, j, k);
      g[s] = h_ * h_ * h_ * (x[s] - target(i, j, k));
    });
    for (Index c = num_states(); c < num_vars(); ++c) g[c] = kAlpha * h_ * h_ * x[c];
  }
  void constraints(std::span<const double> x, std::span<double> g) const override {
    const double s = 1.0 / (h_ * h_);
    for_each_node([&](Index i, Index j, Index k) {
      const Index r = state(i, j, k);
      double v = 6.0 * x[r];
      for (int axis = 0; axis < 3; ++axis)
        for (int dir : {-1, 1}) v -= x[neighbor(i, j, k, axis, dir)];
      g[r] = s * v;
    });
  }
  void walk_jacobian(std::span<const double>, const Emit& emit) const override {
    const double s = 1.0 / (h_ * h_);
    for_each_node([&](Index i, Index j, Index k) {
      const Index r = state(i, j, k);
      emit(r, r, 6.0 * s);
      for (int axis = 0; axis < 3; ++axis)
        for (int dir : {-1, 1}) emit(r, neighbor(i, j, k, axis, dir), -s);
    });
  }
  void walk_hessian(std::span<const double>, double obj_factor, std::span<const double>,
                    const Emit& emit) const override {
    for (Index v = 0; v < num_states(); ++v) emit(v, v, obj_factor * h_ * h_ * h_);
    for (Index v = num_states(); v < num_vars(); ++v) emit(v, v, obj_factor * kAlpha * h_ * h_);
  }

 private:
  template <class F>
  void for_each_node(F&& f) const {
    for (Index k = 1; k <= n_; ++k)
      for (Index j = 1; j <= n_; ++j)
        for (Index i = 1; i <= n_; ++i) f(i, j, k);
  }
};

// Two-dimensional analogue of BoundaryControl3d: N^2 states, 4N boundary
// controls, 5-point stencil.
class BoundaryControl2d final : public StencilNlp {
 public:
  // A smaller source than in 3D keeps the state bound reachable: with
  // d = 20 the state exceeds 3.2 for every admissible control.
  static constexpr double kSource = 15.0;
  static constexpr double kAlpha = 0.01;
  static constexpr double kStateUpper = 3.2;
  static constexpr double kControlLower = 1.8;
  static constexpr double kControlUpper = 2.5;

  explicit BoundaryControl2d(Index n) : StencilNlp(n) {}

  static Census formula_census(Index n) {
    Census c;
    c.n_vars = n * n + 4 * n;
    c.n_cons = n * n;
    c.jac_nnz = 5 * n * n;
    c.hess_nnz = c.n_vars;
    c.both_bounded = 4 * n;
    c.upper_only = n * n;
    return c;
  }

  Index num_states() const { return n_ * n_; }
  Index num_vars() const override { return num_states() + 4 * n_; }
  Index num_constraints() const override { return num_states(); }

  Index state(Index i, Index j) const { return (i - 1) + n_ * (j - 1); }
  // Face 0/1: x1 = 0/1 at j; 2/3: x2 = 0/1 at i.
  Index control(int face, Index a) const { return num_states() + face * n_ + (a - 1); }

  Index neighbor(Index i, Index j, int axis, int dir) const {
    std::array<Index, 2> p{i, j};
    p[axis] += dir;
    if (p[axis] == 0 || p[axis] == n_ + 1) return control(2 * axis + (dir > 0 ? 1 : 0), axis == 0 ? j : i);
    return state(p[0], p[1]);
  }

  double target(Index i, Index j) const { return 3.0 + 5.0 * (i * h_) * (j * h_); }

  std::vector<double> var_lower() const override {
    std::vector<double> l(static_cast<std::size_t>(num_vars()), -kInf);
    std::fill(l.begin() + num_states(), l.end(), kControlLower);
    return l;
  }
  std::vector<double> var_upper() const override {
    std::vector<double> u(static_cast<std::size_t>(num_vars()), kStateUpper);
    std::fill(u.begin() + num_states(), u.end(), kControlUpper);
    return u;
  }
  std::vector<double> con_lower() const override { return std::vector<double>(num_states(), kSource); }
  std::vector<double> con_upper() const override { return con_lower(); }

  double objective(std::span<const double> x) const override {
    double track = 0.0, cost = 0.0;
    for_each_node([&](Index i, Index j) {
      const double d = x[state(i, j)] - target(i, j);
      track += d * d;
    });
    for (Index c = num_states(); c < num_vars(); ++c) cost += x[c] * x[c];
    return 0.5 * h_ * h_ * track + 0.5 * kAlpha * h_ * cost;
  }
  void gradient(std::span<const double> x, std::span<double> g) const override {
    for_each_node([&](Index i, Index j) {
      const Index s = state(i, j);
      g[s] = h_ * h_ * (x[s] - target(i, j));
    });
    for (Index c = num_states(); c < num_vars(); ++c) g[c] = kAlpha * h_ * x[c];
  }
  void constraints(std::span<const double> x, std::span<double> g) const override {
    const double s = 1.0 / (h_ * h_);
    for_each_node([&](Index i, Index j) {
      const Index r = state(i, j);
      double v = 4.0 * x[r];
      for (int axis = 0; axis < 2; ++axis)
        for (int dir : {-1, 1}) v -= x[neighbor(i, j, axis, dir)];
      g[r] = s * v;
    });
  }
  void walk_jacobian(std::span<const double>, const Emit& emit) const override {
    const double s = 1.0 / (h_ * h_);
    for_each_node([&](Index i, Index j) {
      const Index r = state(i, j);
      emit(r, r, 4.0 * s);
      for (int axis = 0; axis < 2; ++axis)
        for (int dir : {-1, 1}) emit(r, neighbor(i, j, axis, dir), -s);
    });
  }
  void walk_hessian(std::span<const double>, double obj_factor, std::span<const double>,
                    const Emit& emit) const override {
    for (Index v = 0; v < num_states(); ++v) emit(v, v, obj_factor * h_ * h_);
    for (Index v = num_states(); v < num_vars(); ++v) emit(v, v, obj_factor * kAlpha * h_);
  }

 private:
  template <class F>
  void for_each_node(F&& f) const {
    for (Index j = 1; j <= n_; ++j)
      for (Index i = 1; i <= n_; ++i) f(i, j);
  }
};

// Distributed control in 2D with a bilinear reaction term:
//   (-Laplace_h y + y u)(node) = d   at the N^2 interior nodes,
//   y_b - y_adjacent = 0             at the 4N boundary nodes (no corners).
// Variables are ordered [interior y][boundary y][u].
class DistributedControl2d final : public StencilNlp {
 public:
  static constexpr double kSource = 20.0;
  static constexpr double kAlpha = 0.01;
  static constexpr double kStateLower = 0.0;
  static constexpr double kStateUpper = 7.0;
  static constexpr double kControlLower = 1.0;
  static constexpr double kControlUpper = 10.0;

  explicit DistributedControl2d(Index n) : StencilNlp(n) {}

  static Census formula_census(Index n) {
    Census c;
    c.n_vars = 2 * n * n + 4 * n;
    c.n_cons = n * n + 4 * n;
    c.jac_nnz = 6 * n * n + 8 * n;
    c.hess_nnz = 3 * n * n;
    c.both_bounded = c.n_vars;
    return c;
  }

  Index num_interior() const { return n_ * n_; }
  Index num_vars() const override { return 2 * n_ * n_ + 4 * n_; }
  Index num_constraints() const override { return n_ * n_ + 4 * n_; }

  Index state(Index i, Index j) const { return (i - 1) + n_ * (j - 1); }
  // Face 0/1: x1 = 0/1 at j; 2/3: x2 = 0/1 at i.
  Index boundary_state(int face, Index a) const { return num_interior() + face * n_ + (a - 1); }
  Index control(Index i, Index j) const { return num_interior() + 4 * n_ + state(i, j); }

  Index neighbor(Index i, Index j, int axis, int dir) const {
    std::array<Index, 2> p{i, j};
    p[axis] += dir;
    if (p[axis] == 0 || p[axis] == n_ + 1) return boundary_state(2 * axis + (dir > 0 ? 1 : 0), axis == 0 ? j : i);
    return state(p[0], p[1]);
  }

  // Interior node next to boundary node (face, a).
  Index adjacent_interior(int face, Index a) const {
    switch (face) {
      case 0: return state(1, a);
      case 1: return state(n_, a);
      case 2: return state(a, 1);
      default: return state(a, n_);
    }
  }

  double target(Index i, Index j) const { return 3.0 + 5.0 * (i * h_) * (j * h_); }

  std::vector<double> var_lower() const override {
    std::vector<double> l(static_cast<std::size_t>(num_vars()), kStateLower);
    std::fill(l.begin() + num_interior() + 4 * n_, l.end(), kControlLower);
    return l;
  }
  std::vector<double> var_upper() const override {
    std::vector<double> u(static_cast<std::size_t>(num_vars()), kStateUpper);
    std::fill(u.begin() + num_interior() + 4 * n_, u.end(), kControlUpper);
    return u;
  }
  std::vector<double> con_lower() const override {
    std::vector<double> l(static_cast<std::size_t>(num_constraints()), 0.0);
    std::fill(l.begin(), l.begin() + num_interior(), kSource);
    return l;
  }
  std::vector<double> con_upper() const override { return con_lower(); }

  double objective(std::span<const double> x) const override {
    double track = 0.0, cost = 0.0;
    for_each_node([&](Index i, Index j) {
      const double d = x[state(i, j)] - target(i, j);
      track += d * d;
      cost += x[control(i, j)] * x[control(i, j)];
    });
    return 0.5 * h_ * h_ * track + 0.5 * kAlpha * h_ * h_ * cost;
  }
  void gradient(std::span<const double> x, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
    for_each_node([&](Index i, Index j) {
      g[state(i, j)] = h_ * h_ * (x[state(i, j)] - target(i, j));
      g[control(i, j)] = kAlpha * h_ * h_ * x[control(i, j)];
    });
  }
  void constraints(std::span<const double> x, std::span<double> g) const override {
    const double s = 1.0 / (h_ * h_);
    for_each_node([&](Index i, Index j) {
      const Index r = state(i, j);
      double v = 4.0 * x[r];
      for (int axis = 0; axis < 2; ++axis)
        for (int dir : {-1, 1}) v -= x[neighbor(i, j, axis, dir)];
      g[r] = s * v + x[r] * x[control(i, j)];
    });
    for_each_boundary([&](Index row, Index b, Index adj) { g[row] = x[b] - x[adj]; });
  }
  void walk_jacobian(std::span<const double> x, const Emit& emit) const override {
    const double s = 1.0 / (h_ * h_);
    for_each_node([&](Index i, Index j) {
      const Index r = state(i, j), u = control(i, j);
      emit(r, r, 4.0 * s + at(x, u));
      for (int axis = 0; axis < 2; ++axis)
        for (int dir : {-1, 1}) emit(r, neighbor(i, j, axis, dir), -s);
      emit(r, u, at(x, r));
    });
    for_each_boundary([&](Index row, Index b, Index adj) {
      emit(row, b, 1.0);
      emit(row, adj, -1.0);
    });
  }
  void walk_hessian(std::span<const double>, double obj_factor, std::span<const double> y,
                    const Emit& emit) const override {
    for_each_node([&](Index i, Index j) { emit(state(i, j), state(i, j), obj_factor * h_ * h_); });
    for_each_node([&](Index i, Index j) { emit(control(i, j), control(i, j), obj_factor * kAlpha * h_ * h_); });
    for_each_node([&](Index i, Index j) { emit(control(i, j), state(i, j), at(y, state(i, j))); });
  }

 private:
  template <class F>
  void for_each_node(F&& f) const {
    for (Index j = 1; j <= n_; ++j)
      for (Index i = 1; i <= n_; ++i) f(i, j);
  }
  // f(row, boundary variable, adjacent interior variable)
  template <class F>
  void for_each_boundary(F&& f) const {
    for (int face = 0; face < 4; ++face)
      for (Index a = 1; a <= n_; ++a) {
        const Index b = boundary_state(face, a);
        f(b, b, adjacent_interior(face, a));
      }
  }
};

namespace detail {

template <class P>
GeneratedNlp wrap_grid(std::string kind, Index n) {
  auto p = std::make_shared<const P>(n);
  GeneratedNlp g;
  g.kind = kind;
  g.grid = n;
  g.id = kind + "-N" + std::to_string(n);
  g.census = P::formula_census(n);
  g.problem = std::move(p);
  return g;
}

}  // namespace detail

inline GeneratedNlp gen_boundary_control_3d(Index n) { return detail::wrap_grid<BoundaryControl3d>("bc3d", n); }
inline GeneratedNlp gen_boundary_control_2d(Index n) { return detail::wrap_grid<BoundaryControl2d>("bc2d", n); }
inline GeneratedNlp gen_dist_control_2d(Index n) { return detail::wrap_grid<DistributedControl2d>("dist2d", n); }

}  // namespace ipbench::problems

#endif  // IPBENCH_PROBLEMS_PDE_HPP
