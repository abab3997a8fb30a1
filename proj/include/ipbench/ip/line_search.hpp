#ifndef IPBENCH_IP_LINE_SEARCH_HPP
#define IPBENCH_IP_LINE_SEARCH_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace ipbench::ip {

// Two most recent (theta, phi) pairs left behind; a trial no better in
// both measures than one of them is rejected.
class PairMemory {
 public:
  bool dominated(double theta, double phi) const {
    for (int k = 0; k < size_; ++k) {
      if (theta >= pairs_[k].theta && phi >= pairs_[k].phi) return true;
    }
    return false;
  }
  void add(double theta, double phi) {
    pairs_[next_] = {theta, phi};
    next_ = 1 - next_;
    size_ = std::min(size_ + 1, 2);
  }
  void reset() { size_ = next_ = 0; }
  int size() const { return size_; }

 private:
  struct Pair {
    double theta = 0.0, phi = 0.0;
  };
  Pair pairs_[2];
  int next_ = 0;
  int size_ = 0;
};

struct LineSearchPoint {
  double theta = 0.0;  // ||c||_1
  double phi = 0.0;    // barrier objective
};

inline constexpr double kThetaDecrease = 1e-5;
inline constexpr double kArmijo = 1e-4;
inline constexpr double kThetaSlack = 1e-4;

// Sufficient progress test for a trial point at step length alpha along a
// direction with barrier slope `slope` = grad phi . dv. A step accepted for
// barrier decrease may raise infeasibility up to `theta_ceiling`.
inline bool acceptable_trial(const LineSearchPoint& current, const LineSearchPoint& trial, double alpha,
                             double slope, const PairMemory& memory, double theta_ceiling = kThetaSlack) {
  if (!std::isfinite(trial.theta) || !std::isfinite(trial.phi)) return false;
  if (memory.dominated(trial.theta, trial.phi)) return false;
  if (trial.theta < current.theta && trial.theta <= (1.0 - kThetaDecrease) * current.theta) return true;
  const double roundoff = 10.0 * std::numeric_limits<double>::epsilon() * std::abs(current.phi);
  const bool armijo = trial.phi <= current.phi + kArmijo * alpha * std::min(slope, 0.0) + roundoff;
  return armijo && trial.theta <= std::max(current.theta, theta_ceiling);
}

struct LineSearchResult {
  bool accepted = false;
  double alpha = 0.0;
  int backtracks = 0;
  LineSearchPoint point;
};

// Backtracking alpha_max * 2^-j, j = 0..max_backtracks-1. `evaluate(alpha)`
// returns the measures at the trial point.
template <class Evaluate>
LineSearchResult backtrack(Evaluate&& evaluate, const LineSearchPoint& current, double alpha_max, double slope,
                           const PairMemory& memory, int max_backtracks, double theta_ceiling = kThetaSlack) {
  LineSearchResult r;
  double alpha = alpha_max;
  for (int j = 0; j < max_backtracks; ++j, alpha *= 0.5) {
    const LineSearchPoint trial = evaluate(alpha);
    if (acceptable_trial(current, trial, alpha, slope, memory, theta_ceiling)) {
      r.accepted = true;
      r.alpha = alpha;
      r.backtracks = j;
      r.point = trial;
      return r;
    }
  }
  r.backtracks = max_backtracks;
  return r;
}

}  // namespace ipbench::ip

#endif  // IPBENCH_IP_LINE_SEARCH_HPP
