#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lrm/series.hpp"

namespace lrm {

struct RsCurve {
  std::vector<std::size_t> n_values;
  std::vector<double> rs_means;
  double H = 0.0;  // slope of lg (R/S)_n against lg n
  double slope_stderr = 0.0;
  double r2 = 0.0;
  std::vector<std::string> warnings;
};

/// Classical rescaled-range statistic over disjoint windows (trailing
/// remainder discarded) with the sample (n - 1) standard deviation. Windows
/// with zero deviation are skipped; a window length with no usable window is
/// dropped with a warning. Every n must satisfy 4 <= n <= N / 2, and at least
/// three window lengths must survive.
RsCurve rescaled_range(const UniformSeries& u, std::span<const std::size_t> n_list);

/// `count` distinct integers log-spaced over [lo, hi]; duplicates produced by
/// rounding are removed, so the result can be shorter than `count`.
std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t count);

/// 16 log-spaced window lengths from 10 to N / 4.
std::vector<std::size_t> default_window_sizes(std::size_t series_length);

}  // namespace lrm
