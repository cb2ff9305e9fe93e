#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "boundary_rf/common.hpp"

namespace brf {

/// Scalar triple (g, f, h) shaping the masked velocity
///   v(x,t) = g(t)*(C - x) + f(t)*x + h(t)*m(x,t).
/// Endpoint constraints g(1)=f(0)=h(0)=h(1)=0 and g(0)=f(1)=1 are
/// checked numerically at construction (tolerance 1e-12). Evaluation
/// snaps t=0 and t=1 to the exact constrained values so the boundary
/// identities hold bit-exactly whatever the formulas round to.
class BoundaryFunctionSet {
 public:
  using ScalarFn = std::function<double(double)>;

  struct Coeffs {
    double g, f, h;
  };

  BoundaryFunctionSet(std::string name, ScalarFn g, ScalarFn f, ScalarFn h);

  /// One of: standard_cosine, offset_cosine, quadratic, square_root, linear.
  static BoundaryFunctionSet named(std::string_view name);
  static const std::vector<std::string>& names();

  Coeffs eval(double t) const;

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  ScalarFn g_, f_, h_;
};

}  // namespace brf
