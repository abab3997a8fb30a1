#ifndef IPBENCH_LDL_TYPES_HPP
#define IPBENCH_LDL_TYPES_HPP

#include <ostream>
#include <stdexcept>

#include "ipbench/common.hpp"

namespace ipbench::ldl {

struct Inertia {
  Index positive = 0;
  Index negative = 0;
  Index zero = 0;

  Index size() const { return positive + negative + zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Inertia& in) {
    return os << '(' << in.positive << ", " << in.negative << ", " << in.zero << ')';
  }
};

struct PivotOptions {
  // A 1x1 pivot d is accepted when |d| >= threshold * (largest competing
  // entry in its column). Must lie in (0, 0.5].
  double threshold = 0.01;
  // Pivots with magnitude <= zero_pivot_tol * max|scaled A| count as zero.
  double zero_pivot_tol = 1e-11;

  void validate() const {
    if (!(threshold > 0.0 && threshold <= 0.5)) throw InvalidInput("pivot threshold must lie in (0, 0.5]");
    if (!(zero_pivot_tol >= 0.0)) throw InvalidInput("zero pivot tolerance must be nonnegative");
  }
};

struct FactorOptions {
  PivotOptions pivot;
  int workers = 1;
  bool scale = true;
};

// One diagonal block of D starting at position `start`. For order-2 blocks
// the block is [[d11, d21], [d21, d22]].
struct DBlock {
  Index start = 0;
  int size = 1;
  double d11 = 0.0;
  double d21 = 0.0;
  double d22 = 0.0;

  double determinant() const { return size == 1 ? d11 : d11 * d22 - d21 * d21; }
};

class SingularFactorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ipbench::ldl

#endif  // IPBENCH_LDL_TYPES_HPP
