#include "boundary_rf/score.hpp"

namespace brf {

namespace {

Mat grid_points(const GridSpec& spec) {
  require(spec.nx >= 2 && spec.ny >= 2, "GridSpec: need at least 2 points per axis");
  require(spec.x_max > spec.x_min && spec.y_max > spec.y_min, "GridSpec: empty extent");
  Mat pts(2, spec.nx * spec.ny);
  const double dx = (spec.x_max - spec.x_min) / static_cast<double>(spec.nx - 1);
  const double dy = (spec.y_max - spec.y_min) / static_cast<double>(spec.ny - 1);
  for (Index iy = 0; iy < spec.ny; ++iy)
    for (Index ix = 0; ix < spec.nx; ++ix) {
      const Index k = iy * spec.nx + ix;
      pts(0, k) = spec.x_min + dx * static_cast<double>(ix);
      pts(1, k) = spec.y_min + dy * static_cast<double>(iy);
    }
  return pts;
}

}  // namespace

ScoreEstimate tweedie_score_batch(const VelocityField& field, const Mat& xs, double t,
                                  const TweedieOptions& opts) {
  require(t >= 0.0 && t <= 1.0, "tweedie_score: t must lie in [0, 1]");
  require(opts.singular_delta > 0.0 && opts.singular_delta < 1.0,
          "tweedie_score: singular_delta must lie in (0, 1)");
  double eff = t;
  bool clamped = false;
  if (t > 1.0 - opts.singular_delta) {
    if (!opts.clamp_near_one)
      throw SingularTimeError(
          "tweedie_score: t is within singular_delta of 1, where the conversion diverges");
    eff = 1.0 - opts.singular_delta;
    clamped = true;
  }
  Mat values = (eff * field.eval_batch(xs, eff) - xs) / (1.0 - eff);
  return {std::move(values), eff, clamped};
}

Vec tweedie_score(const VelocityField& field, const Vec& x, double t, const TweedieOptions& opts) {
  Mat xs(x.size(), 1);
  xs.col(0) = x;
  return tweedie_score_batch(field, xs, t, opts).values.col(0);
}

GridField velocity_field_on_grid(const VelocityField& field, const GridSpec& spec, double t) {
  require(field.dim() == 2, "velocity_field_on_grid: planar fields only");
  GridField out;
  out.spec = spec;
  out.points = grid_points(spec);
  out.values = field.eval_batch(out.points, t);
  out.effective_t = t;
  return out;
}

GridField score_field_on_grid(const VelocityField& field, const GridSpec& spec, double t,
                              const TweedieOptions& opts) {
  require(field.dim() == 2, "score_field_on_grid: planar fields only");
  GridField out;
  out.spec = spec;
  out.points = grid_points(spec);
  ScoreEstimate est = tweedie_score_batch(field, out.points, t, opts);
  out.values = std::move(est.values);
  out.effective_t = est.effective_t;
  out.clamped = est.clamped;
  return out;
}

}  // namespace brf
