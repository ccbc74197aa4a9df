#include "supersel/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "supersel/errors.hpp"

namespace supersel {

namespace {

// Collects (abscissa, ordinate) pairs with finite logs on the declared axes.
std::vector<std::pair<double, double>> usable_points(
    const std::vector<ScalingPoint>& points, FitAxes axes) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const ScalingPoint& p : points) {
    if (!std::isfinite(p.log_value)) continue;
    const double x =
        axes == FitAxes::loglog ? std::log(p.parameter) : p.parameter;
    if (!std::isfinite(x)) continue;
    xy.emplace_back(x, p.log_value);
  }
  return xy;
}

}  // namespace

SlopeFit fit_log_slope(const std::vector<ScalingPoint>& points, FitAxes axes) {
  const auto xy = usable_points(points, axes);
  const std::size_t n = xy.size();
  if (n < 2) {
    throw DomainError("slope fit needs at least two points with finite logs");
  }

  double x_mean = 0.0;
  double y_mean = 0.0;
  for (const auto& [x, y] : xy) {
    x_mean += x;
    y_mean += y;
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - x_mean) * (x - x_mean);
    sxy += (x - x_mean) * (y - y_mean);
  }
  if (sxx == 0.0) {
    throw DomainError("slope fit abscissa is degenerate (all points equal)");
  }

  const double slope = sxy / sxx;
  const double intercept = y_mean - slope * x_mean;

  // Residual-based standard error; an exact two-point fit has none.
  double ssr = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = y - (intercept + slope * x);
    ssr += r * r;
  }
  double stderr_value = 0.0;
  if (n > 2) {
    stderr_value = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  }
  return SlopeFit{slope, stderr_value};
}

ScalingSeries make_series(std::vector<ScalingPoint> points, FitAxes axes) {
  std::sort(points.begin(), points.end(),
            [](const ScalingPoint& a, const ScalingPoint& b) {
              return a.parameter < b.parameter;
            });

  ScalingSeries series;
  series.axes = axes;
  // Exactly zero means zero with an infinite log, distinguishing identical
  // vanishing from raw-value underflow (which keeps a finite log companion).
  series.exact_zero =
      !points.empty() && std::all_of(points.begin(), points.end(),
                                     [](const ScalingPoint& p) {
                                       return p.value == 0.0 &&
                                              !std::isfinite(p.log_value);
                                     });
  series.points = std::move(points);

  std::size_t usable = usable_points(series.points, axes).size();
  if (usable >= 2) {
    series.fit = fit_log_slope(series.points, axes);
  }
  return series;
}

}  // namespace supersel
