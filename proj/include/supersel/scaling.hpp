#ifndef SUPERSEL_SCALING_HPP
#define SUPERSEL_SCALING_HPP

#include <optional>
#include <vector>

namespace supersel {

/// Which abscissa the slope fit uses. Semi-log: log_value against the raw
/// parameter (exponential laws). Log-log: log_value against log(parameter)
/// (power laws).
enum class FitAxes { semilog, loglog };

struct ScalingPoint {
  double parameter;
  double value;
  double log_value;  // natural log; -inf for exact zeros
};

struct SlopeFit {
  double slope;
  double stderr_value;  // OLS standard error of the slope from residuals
};

/// Ordinary least squares on the declared axes over points with finite log
/// values. Throws DomainError with fewer than two usable points or a
/// degenerate abscissa.
SlopeFit fit_log_slope(const std::vector<ScalingPoint>& points, FitAxes axes);

/// The output of every sweep experiment: sampled points plus the fitted
/// slope. `fit` is absent when fewer than two points have finite logs;
/// `exact_zero` marks a series whose every value is exactly zero (a claim
/// that holds identically, with nothing left to fit).
struct ScalingSeries {
  std::vector<ScalingPoint> points;  // sorted by parameter
  FitAxes axes = FitAxes::loglog;
  std::optional<SlopeFit> fit;
  bool exact_zero = false;
};

/// Sorts points by parameter, flags exact zeros, and fits when possible.
ScalingSeries make_series(std::vector<ScalingPoint> points, FitAxes axes);

}  // namespace supersel

#endif
