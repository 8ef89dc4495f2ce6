#pragma once

#include <cstddef>
#include <span>

namespace lrm {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
  double ssr = 0.0;  // residual sum of squares
  std::size_t n = 0;
};

/// Requires at least two points with distinct x. slope_stderr is zero for
/// exactly two points. r2 is 1 when y is constant.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace lrm
