#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lrm/estimate.hpp"
#include "lrm/linear_fit.hpp"
#include "lrm/series.hpp"

namespace lrm {

/// Piecewise log-log power law S ~ f^-beta_low below f_break and
/// S ~ f^-beta_high from f_break upward.
struct TwoRegimeFit {
  double beta_low = 0.0;
  double beta_high = 0.0;
  double f_break = 0.0;
  double stderr_low = 0.0;
  double stderr_high = 0.0;
  double r2_low = 0.0;
  double r2_high = 0.0;
  std::size_t break_index = 0;  // first grid point of the high-frequency side
};

struct PsdEstimate {
  std::vector<double> frequencies;  // cycles per unit time, strictly increasing
  std::vector<double> power;
  std::size_t n_days_averaged = 1;
  std::optional<TwoRegimeFit> fit;
};

/// Direct non-uniform periodogram
///   S(f) = |sum_j x_j exp(2 pi i f (t_j - t_0))|^2 / (2 pi t_n)
/// with t_n the series span. Frequencies are in cycles per unit of the
/// series' time axis. Requires at least two points and a positive span.
PsdEstimate periodogram(const Series& series, std::span<const double> freq_grid,
                        unsigned threads = 1);

/// Same sum with an explicit span t_n; admits single-point series.
PsdEstimate periodogram_with_span(const Series& series, std::span<const double> freq_grid,
                                  double span, unsigned threads = 1);

/// `count` log-spaced frequencies from f_lo to f_hi inclusive.
std::vector<double> log_frequency_grid(double f_lo, double f_hi, std::size_t count);

/// Log-spaced grid from 1/t_n to half the mean event rate.
std::vector<double> default_frequency_grid(const Series& series, std::size_t count = 200);

/// Arithmetic mean of per-day periodograms on a shared grid.
PsdEstimate average_daily_psd(std::span<const Series> days, std::span<const double> freq_grid,
                              unsigned threads = 1);

/// Exhaustive break search: every split leaving at least `min_points_per_side`
/// positive-power grid points on each side is fitted with two independent
/// log-log lines; the split with the smallest total squared residual wins.
TwoRegimeFit fit_two_regime_psd(const PsdEstimate& psd, std::size_t min_points_per_side = 8);

/// Single log-log line over grid points with f_lo <= f <= f_hi. The returned
/// slope is d lg S / d lg f (negative for 1/f-type spectra).
LineFit fit_psd_band(const PsdEstimate& psd, double f_lo, double f_hi);

/// H = (1 + beta_low) / 2; flagged out of range unless 0 <= beta_low <= 1.
HurstEstimate hurst_from_psd(double beta_low, double beta_stderr = 0.0);

}  // namespace lrm
