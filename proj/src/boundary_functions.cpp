#include "boundary_rf/boundary_functions.hpp"

#include <cmath>

namespace brf {

namespace {
constexpr double kEndpointTol = 1e-12;
}

BoundaryFunctionSet::BoundaryFunctionSet(std::string name, ScalarFn g, ScalarFn f, ScalarFn h)
    : name_(std::move(name)), g_(std::move(g)), f_(std::move(f)), h_(std::move(h)) {
  require(g_ && f_ && h_, "BoundaryFunctionSet: missing function");
  const double checks[] = {g_(1.0), f_(0.0), h_(0.0), h_(1.0), g_(0.0) - 1.0, f_(1.0) - 1.0};
  for (double c : checks) {
    require(std::abs(c) <= kEndpointTol,
            "BoundaryFunctionSet '" + name_ + "': endpoint constraint violated");
  }
}

BoundaryFunctionSet BoundaryFunctionSet::named(std::string_view name) {
  if (name == "standard_cosine") {
    return BoundaryFunctionSet(
        std::string(name), [](double t) { return std::cos(M_PI / 2.0 * t); },
        [](double t) { return std::sin(M_PI / 2.0 * t); },
        [](double t) { return std::sin(M_PI * t); });
  }
  if (name == "offset_cosine") {
    return BoundaryFunctionSet(
        std::string(name), [](double t) { return std::cos(M_PI / 2.0 * t); },
        [](double t) { return 1.0 - std::cos(M_PI / 2.0 * t); },
        [](double t) { return std::sin(M_PI * t); });
  }
  if (name == "quadratic") {
    return BoundaryFunctionSet(
        std::string(name), [](double t) { return 1.0 - t * t; },
        [](double t) { return t * t; }, [](double t) { return t * t * (1.0 - t * t); });
  }
  if (name == "square_root") {
    return BoundaryFunctionSet(
        std::string(name), [](double t) { return 1.0 - std::sqrt(t); },
        [](double t) { return std::sqrt(t); },
        [](double t) { return std::sqrt(t) * (1.0 - std::sqrt(t)); });
  }
  if (name == "linear") {
    return BoundaryFunctionSet(
        std::string(name), [](double t) { return 1.0 - t; }, [](double t) { return t; },
        [](double t) { return t * (1.0 - t); });
  }
  throw std::invalid_argument("unknown boundary function set: " + std::string(name));
}

const std::vector<std::string>& BoundaryFunctionSet::names() {
  static const std::vector<std::string> kNames = {"standard_cosine", "offset_cosine", "quadratic",
                                                  "square_root", "linear"};
  return kNames;
}

BoundaryFunctionSet::Coeffs BoundaryFunctionSet::eval(double t) const {
  require(t >= 0.0 && t <= 1.0, "boundary functions: t outside [0,1]");
  if (t == 0.0) return {1.0, 0.0, 0.0};
  if (t == 1.0) return {0.0, 1.0, 0.0};
  return {g_(t), f_(t), h_(t)};
}

}  // namespace brf
