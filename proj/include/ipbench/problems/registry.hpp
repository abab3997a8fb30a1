#ifndef IPBENCH_PROBLEMS_REGISTRY_HPP
#define IPBENCH_PROBLEMS_REGISTRY_HPP

#include <string>
#include <vector>

#include "ipbench/problems/analytic.hpp"
#include "ipbench/problems/pde.hpp"

namespace ipbench::problems {

inline const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds{"bc3d",       "bc2d",       "dist2d",     "analytic-a",
                                              "analytic-b", "analytic-c", "analytic-d"};
  return kinds;
}

inline bool is_grid_kind(const std::string& kind) { return kind == "bc3d" || kind == "bc2d" || kind == "dist2d"; }

// Instance by kind name; N is ignored for the analytic catalog.
inline GeneratedNlp generate(const std::string& kind, Index n = 0) {
  if (kind == "bc3d") return gen_boundary_control_3d(n);
  if (kind == "bc2d") return gen_boundary_control_2d(n);
  if (kind == "dist2d") return gen_dist_control_2d(n);
  if (kind == "analytic-a") return analytic_a();
  if (kind == "analytic-b") return analytic_b();
  if (kind == "analytic-c") return analytic_c();
  if (kind == "analytic-d") return analytic_d();
  throw InvalidInput("unknown problem kind: " + kind);
}

}  // namespace ipbench::problems

#endif  // IPBENCH_PROBLEMS_REGISTRY_HPP
