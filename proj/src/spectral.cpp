#include "lrm/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "lrm/error.hpp"
#include "lrm/parallel.hpp"

namespace lrm {
namespace {

// |sum_j x_j e^{2 pi i f dt_j}|^2 with the phase reduced to one turn first,
// keeping sin/cos arguments small for long spans.
double power_at(std::span<const double> dt, std::span<const double> x, double f) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double cycles = f * dt[j];
    const double phase = 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
    re += x[j] * std::cos(phase);
    im += x[j] * std::sin(phase);
  }
  return re * re + im * im;
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error("periodogram: empty frequency grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw Error("periodogram: frequencies must be positive and finite");
    if (i && !(grid[i] > grid[i - 1]))
      throw Error("periodogram: frequencies must be strictly increasing");
  }
}

}  // namespace

PsdEstimate periodogram(const Series& series, std::span<const double> freq_grid,
                        unsigned threads) {
  if (series.size() < 2) throw Error("periodogram: need at least two points");
  return periodogram_with_span(series, freq_grid, series.span(), threads);
}

PsdEstimate periodogram_with_span(const Series& series, std::span<const double> freq_grid,
                                  double span, unsigned threads) {
  check_grid(freq_grid);
  if (series.empty()) throw Error("periodogram: empty series");
  if (!(span > 0.0)) throw Error("periodogram: series span must be positive");

  std::vector<double> dt(series.size());
  for (std::size_t j = 0; j < dt.size(); ++j) dt[j] = series.t[j] - series.t.front();

  PsdEstimate psd;
  psd.frequencies.assign(freq_grid.begin(), freq_grid.end());
  psd.power.resize(freq_grid.size());
  const double norm = 1.0 / (2.0 * std::numbers::pi * span);
  parallel_for(freq_grid.size(), threads, [&](std::size_t k) {
    psd.power[k] = norm * power_at(dt, series.x, freq_grid[k]);
  });
  return psd;
}

std::vector<double> log_frequency_grid(double f_lo, double f_hi, std::size_t count) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo)) throw Error("frequency grid needs 0 < f_lo < f_hi");
  if (count < 2) throw Error("frequency grid needs at least two points");
  std::vector<double> grid(count);
  const double a = std::log10(f_lo);
  const double b = std::log10(f_hi);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  grid.front() = f_lo;
  grid.back() = f_hi;
  return grid;
}

std::vector<double> default_frequency_grid(const Series& series, std::size_t count) {
  const double span = series.span();
  if (series.size() < 2 || !(span > 0.0))
    throw Error("frequency grid: series needs two points and a positive span");
  const double rate = static_cast<double>(series.size() - 1) / span;
  return log_frequency_grid(1.0 / span, rate / 2.0, count);
}

PsdEstimate average_daily_psd(std::span<const Series> days, std::span<const double> freq_grid,
                              unsigned threads) {
  if (days.empty()) throw Error("average_daily_psd: no days given");
  std::vector<PsdEstimate> per_day(days.size());
  // Parallelize across days; each periodogram runs single-threaded.
  parallel_for(days.size(), threads,
               [&](std::size_t d) { per_day[d] = periodogram(days[d], freq_grid, 1); });

  PsdEstimate avg;
  avg.frequencies.assign(freq_grid.begin(), freq_grid.end());
  avg.power.assign(freq_grid.size(), 0.0);
  for (const auto& p : per_day)
    for (std::size_t k = 0; k < avg.power.size(); ++k) avg.power[k] += p.power[k];
  for (double& p : avg.power) p /= static_cast<double>(days.size());
  avg.n_days_averaged = days.size();
  return avg;
}

TwoRegimeFit fit_two_regime_psd(const PsdEstimate& psd, std::size_t min_points_per_side) {
  std::vector<double> lf, lp;
  std::vector<std::size_t> index;
  for (std::size_t k = 0; k < psd.frequencies.size(); ++k) {
    if (!(psd.power[k] > 0.0) || !(psd.frequencies[k] > 0.0)) continue;
    lf.push_back(std::log10(psd.frequencies[k]));
    lp.push_back(std::log10(psd.power[k]));
    index.push_back(k);
  }
  const std::size_t m = std::max<std::size_t>(min_points_per_side, 2);
  if (lf.size() < 2 * m)
    throw Error("fit_two_regime_psd: need at least " + std::to_string(2 * m) +
                " positive grid points, have " + std::to_string(lf.size()));

  std::optional<TwoRegimeFit> best;
  double best_ssr = std::numeric_limits<double>::infinity();
  const std::span<const double> x(lf), y(lp);
  for (std::size_t b = m; b + m <= lf.size(); ++b) {
    const LineFit lo = fit_line(x.first(b), y.first(b));
    const LineFit hi = fit_line(x.subspan(b), y.subspan(b));
    const double ssr = lo.ssr + hi.ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best = TwoRegimeFit{-lo.slope,  -hi.slope, psd.frequencies[index[b]],
                          lo.slope_stderr, hi.slope_stderr, lo.r2, hi.r2, index[b]};
    }
  }
  return *best;
}

LineFit fit_psd_band(const PsdEstimate& psd, double f_lo, double f_hi) {
  std::vector<double> lf, lp;
  for (std::size_t k = 0; k < psd.frequencies.size(); ++k) {
    const double f = psd.frequencies[k];
    if (f < f_lo || f > f_hi || !(psd.power[k] > 0.0)) continue;
    lf.push_back(std::log10(f));
    lp.push_back(std::log10(psd.power[k]));
  }
  if (lf.size() < 3) throw Error("fit_psd_band: fewer than three points in band");
  return fit_line(lf, lp);
}

HurstEstimate hurst_from_psd(double beta_low, double beta_stderr) {
  return {(1.0 + beta_low) / 2.0, beta_stderr / 2.0, beta_low >= 0.0 && beta_low <= 1.0};
}

}  // namespace lrm
