#ifndef IPBENCH_IP_INERTIA_CORRECTION_HPP
#define IPBENCH_IP_INERTIA_CORRECTION_HPP

#include <cmath>
#include <vector>

#include "ipbench/ip/options.hpp"
#include "ipbench/ldl/backend.hpp"

namespace ipbench::ip {

struct CorrectionOutcome {
  bool accepted = false;
  double delta_w = 0.0;
  double delta_c = 0.0;
  int factorizations = 0;
  ldl::Inertia inertia;
};

// Perturbs the Newton matrix until its inertia is (n_aug, m, 0).
//
// Each call starts unperturbed. Zero eigenvalues first switch on delta_c
// alone; after that delta_w starts at delta_w0 (never regularized before)
// or at a fraction of the last successful value, and grows geometrically.
class InertiaCorrector {
 public:
  explicit InertiaCorrector(const SolverOptions& opt) : opt_(opt) {}

  // `build(delta_w, delta_c)` must return the matrix to factorize.
  template <class Build>
  CorrectionOutcome factorize(Build&& build, ldl::LinearBackend& backend, Index n_aug, Index m, double mu) {
    const ldl::Inertia wanted{n_aug, m, 0};
    CorrectionOutcome out;
    double dw = 0.0, dc = 0.0;
    while (true) {
      backend.factorize(build(dw, dc));
      ++out.factorizations;
      out.inertia = backend.inertia();
      if (out.inertia == wanted) {
        out.accepted = true;
        out.delta_w = dw;
        out.delta_c = dc;
        if (dw > 0.0) last_delta_w_ = dw;
        return out;
      }
      if (out.inertia.zero > 0 && dc == 0.0) {
        dc = opt_.delta_c_coeff * std::pow(mu, opt_.delta_c_exponent);
        continue;
      }
      if (dw == 0.0) {
        dw = last_delta_w_ == 0.0 ? opt_.delta_w0 : std::max(opt_.delta_w_min, last_delta_w_ * opt_.delta_w_decrease);
      } else {
        dw *= last_delta_w_ == 0.0 ? opt_.delta_w_first_growth : opt_.delta_w_growth;
      }
      if (dw > opt_.delta_w_max) {
        out.delta_w = dw;
        out.delta_c = dc;
        return out;
      }
    }
  }

  double last_delta_w() const { return last_delta_w_; }

 private:
  SolverOptions opt_;
  double last_delta_w_ = 0.0;
};

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_INERTIA_CORRECTION_HPP
