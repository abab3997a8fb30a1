#ifndef IPBENCH_COMMON_HPP
#define IPBENCH_COMMON_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipbench {

using Index = std::int64_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Raised for malformed inputs (bad indices, mismatched dimensions, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Column-major dense block, used for right-hand sides and the dense backend.
struct DenseMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(Index r, Index c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r * c), fill) {}

  double& operator()(Index r, Index c) { return data[static_cast<std::size_t>(r + c * rows)]; }
  double operator()(Index r, Index c) const {
    return data[static_cast<std::size_t>(r + c * rows)];
  }

  double* col(Index c) { return data.data() + c * rows; }
  const double* col(Index c) const { return data.data() + c * rows; }

  static DenseMatrix column(const std::vector<double>& v) {
    DenseMatrix m(static_cast<Index>(v.size()), 1);
    m.data = v;
    return m;
  }
};

}  // namespace ipbench

#endif  // IPBENCH_COMMON_HPP
