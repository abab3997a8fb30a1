#ifndef IPBENCH_LDL_BACKEND_HPP
#define IPBENCH_LDL_BACKEND_HPP

#include <cstdlib>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ipbench/ldl/dense.hpp"
#include "ipbench/ldl/multifrontal.hpp"
#include "ipbench/ldl/symbolic.hpp"
#include "ipbench/sparse/amd.hpp"

namespace ipbench::ldl {

inline constexpr const char* kWorkersEnv = "IPBENCH_WORKERS";

// Worker count: an explicit value wins, then IPBENCH_WORKERS, then 1.
inline int resolve_workers(std::optional<int> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 1;
}

// Capability set the interior-point loop needs from a linear solver:
// analyze a pattern once, factorize many value sets with it, report
// inertia, and solve any number of right-hand sides per factorization.
class LinearBackend {
 public:
  virtual ~LinearBackend() = default;
  virtual std::string id() const = 0;
  virtual void analyze(const SymCsc& pattern) = 0;
  virtual void factorize(const SymCsc& matrix) = 0;
  virtual Inertia inertia() const = 0;
  // Overwrites the column-major block `rhs` (n x nrhs) with the solution.
  virtual void solve(std::span<double> rhs, Index nrhs) const = 0;
};

class SparseBackend final : public LinearBackend {
 public:
  explicit SparseBackend(FactorOptions options = {}, sparse::OrderingMethod ordering = sparse::OrderingMethod::Amd,
                         bool refine = true)
      : options_(options), ordering_(ordering), refine_(refine) {}

  std::string id() const override { return "sparse"; }

  void analyze(const SymCsc& pattern) override {
    symbolic_ = analyze_pattern(pattern);
    numeric_.reset();
  }

  void factorize(const SymCsc& matrix) override {
    if (!symbolic_ || !symbolic_->matches(matrix)) symbolic_ = analyze_pattern(matrix);
    numeric_ = ldl::factorize(*symbolic_, matrix, options_);
  }

  Inertia inertia() const override { return require().inertia; }

  void solve(std::span<double> rhs, Index nrhs) const override {
    const auto& f = require();
    DenseMatrix b(f.n, nrhs);
    b.data.assign(rhs.begin(), rhs.end());
    const DenseMatrix x = ldl::solve(f, b, refine_);
    std::copy(x.data.begin(), x.data.end(), rhs.begin());
  }

  const SymbolicFactorization* symbolic() const { return symbolic_ ? &*symbolic_ : nullptr; }
  const NumericFactorization* numeric() const { return numeric_ ? &*numeric_ : nullptr; }

 private:
  SymbolicFactorization analyze_pattern(const SymCsc& pattern) const {
    return ldl::analyze(pattern, sparse::fill_reducing_order(pattern, ordering_));
  }

  const NumericFactorization& require() const {
    if (!numeric_) throw std::logic_error("sparse backend: no factorization available");
    return *numeric_;
  }

  FactorOptions options_;
  sparse::OrderingMethod ordering_;
  bool refine_;
  std::optional<SymbolicFactorization> symbolic_;
  std::optional<NumericFactorization> numeric_;
};

class DenseBackend final : public LinearBackend {
 public:
  explicit DenseBackend(PivotOptions pivot = {}, Index limit = kDefaultDenseLimit, bool refine = true)
      : pivot_(pivot), limit_(limit), refine_(refine) {}

  std::string id() const override { return "dense"; }

  void analyze(const SymCsc& pattern) override {
    if (pattern.n > limit_) {
      throw InvalidInput("dense backend: order " + std::to_string(pattern.n) + " exceeds the limit " +
                         std::to_string(limit_));
    }
    numeric_.reset();
  }

  void factorize(const SymCsc& matrix) override {
    numeric_ = dense_factorize(sparse::to_dense(matrix), pivot_, limit_);
  }

  Inertia inertia() const override { return require().inertia; }

  void solve(std::span<double> rhs, Index nrhs) const override {
    const auto& f = require();
    DenseMatrix b(f.n, nrhs);
    b.data.assign(rhs.begin(), rhs.end());
    const DenseMatrix x = ldl::solve(f, b, refine_);
    std::copy(x.data.begin(), x.data.end(), rhs.begin());
  }

 private:
  const DenseFactorization& require() const {
    if (!numeric_) throw std::logic_error("dense backend: no factorization available");
    return *numeric_;
  }

  PivotOptions pivot_;
  Index limit_;
  bool refine_;
  std::optional<DenseFactorization> numeric_;
};

inline std::unique_ptr<LinearBackend> make_backend(std::string_view name, int workers = 1,
                                                   PivotOptions pivot = {}) {
  if (name == "sparse") {
    FactorOptions opt;
    opt.pivot = pivot;
    opt.workers = workers;
    return std::make_unique<SparseBackend>(opt);
  }
  if (name == "dense") return std::make_unique<DenseBackend>(pivot);
  throw InvalidInput("unknown backend: " + std::string(name));
}

}  // namespace ipbench::ldl

#endif  // IPBENCH_LDL_BACKEND_HPP
