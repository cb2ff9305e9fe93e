#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace brf {

using Vec = Eigen::VectorXd;

/// A batch of points: one sample per column, dimension = rows.
using Mat = Eigen::MatrixXd;

using Index = Eigen::Index;

/// Raised when a numeric pipeline produces non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a score evaluation is requested inside the excluded
/// window near t = 1.
class SingularTimeError : public std::domain_error {
 public:
  explicit SingularTimeError(const std::string& what) : std::domain_error(what) {}
};

/// Neumaier-compensated accumulator. Keeps reductions stable enough
/// that permuted and tiled sums agree to ~1e-12 relative.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace brf
