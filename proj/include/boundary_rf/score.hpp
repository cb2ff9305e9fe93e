#pragma once

#include "boundary_rf/common.hpp"
#include "boundary_rf/velocity.hpp"

namespace brf {

/// The velocity-to-score conversion divides by (1 - t), so times inside
/// singular_delta of 1 either raise SingularTimeError (default) or are
/// clamped to 1 - singular_delta with the clamped flag set.
struct TweedieOptions {
  double singular_delta = 1e-6;
  bool clamp_near_one = false;
};

struct ScoreEstimate {
  Mat values;  // one column per sample
  double effective_t = 0.0;
  bool clamped = false;
};

/// score(x, t) = (t * v(x, t) - x) / (1 - t)
ScoreEstimate tweedie_score_batch(const VelocityField& field, const Mat& xs, double t,
                                  const TweedieOptions& opts = {});

/// Single-point convenience; in clamp mode the shift to 1 - singular_delta
/// happens silently.
Vec tweedie_score(const VelocityField& field, const Vec& x, double t,
                  const TweedieOptions& opts = {});

struct GridSpec {
  double x_min = -4.0;
  double x_max = 4.0;
  double y_min = -4.0;
  double y_max = 4.0;
  Index nx = 20;
  Index ny = 20;
};

/// Planar vector field sampled on a regular grid. Column k holds the point
/// (ix, iy) with k = iy * nx + ix, x varying fastest.
struct GridField {
  GridSpec spec;
  Mat points;
  Mat values;
  double effective_t = 0.0;
  bool clamped = false;
};

GridField velocity_field_on_grid(const VelocityField& field, const GridSpec& spec, double t);

GridField score_field_on_grid(const VelocityField& field, const GridSpec& spec, double t,
                              const TweedieOptions& opts = {});

}  // namespace brf
