#ifndef IPBENCH_PROBLEMS_CENSUS_HPP
#define IPBENCH_PROBLEMS_CENSUS_HPP

#include <cmath>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ipbench/ip/nlp.hpp"
#include "ipbench/ip/options.hpp"

namespace ipbench::problems {

struct Census {
  Index n_vars = 0;
  Index n_cons = 0;
  Index jac_nnz = 0;
  Index hess_nnz = 0;
  Index both_bounded = 0;
  Index lower_only = 0;
  Index upper_only = 0;
  Index free = 0;

  bool operator==(const Census&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const Census& c) {
  return os << "{n_vars " << c.n_vars << ", n_cons " << c.n_cons << ", jac_nnz " << c.jac_nnz << ", hess_nnz "
            << c.hess_nnz << ", both " << c.both_bounded << ", lower " << c.lower_only << ", upper "
            << c.upper_only << ", free " << c.free << "}";
}

inline void count_bounds(const std::vector<double>& lower, const std::vector<double>& upper, Census& c) {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const bool l = std::isfinite(lower[i]), u = std::isfinite(upper[i]);
    if (l && u) {
      ++c.both_bounded;
    } else if (l) {
      ++c.lower_only;
    } else if (u) {
      ++c.upper_only;
    } else {
      ++c.free;
    }
  }
}

// Counts taken from the realized bounds and derivative patterns.
inline Census measure_census(const ip::NlpProblem& p) {
  Census c;
  c.n_vars = p.num_vars();
  c.n_cons = p.num_constraints();
  c.jac_nnz = p.jacobian_pattern().nnz();
  c.hess_nnz = p.hessian_pattern().nnz();
  count_bounds(p.var_lower(), p.var_upper(), c);
  return c;
}

// A problem instance together with its structural metadata and, for the
// analytic catalog, the known answer.
struct GeneratedNlp {
  std::string kind;
  Index grid = 0;  // N; 0 for the analytic catalog
  std::string id;
  std::shared_ptr<const ip::NlpProblem> problem;
  Census census;
  std::optional<double> expected_objective;
  std::vector<double> expected_x;
  std::optional<ip::Status> expected_status;
};

inline void write_manifest(std::ostream& os, const GeneratedNlp& g) {
  os << "id = " << g.id << '\n'
     << "kind = " << g.kind << '\n'
     << "N = " << g.grid << '\n'
     << "n_vars = " << g.census.n_vars << '\n'
     << "n_cons = " << g.census.n_cons << '\n'
     << "jac_nnz = " << g.census.jac_nnz << '\n'
     << "hess_nnz = " << g.census.hess_nnz << '\n'
     << "both_bounded = " << g.census.both_bounded << '\n'
     << "lower_only = " << g.census.lower_only << '\n'
     << "upper_only = " << g.census.upper_only << '\n'
     << "free = " << g.census.free << '\n';
}

}  // namespace ipbench::problems

#endif  // IPBENCH_PROBLEMS_CENSUS_HPP
