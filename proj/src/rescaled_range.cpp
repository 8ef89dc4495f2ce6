#include "lrm/rescaled_range.hpp"

#include <algorithm>
#include <cmath>

#include "lrm/error.hpp"
#include "lrm/linear_fit.hpp"

namespace lrm {

RsCurve rescaled_range(const UniformSeries& u, std::span<const std::size_t> n_list) {
  const std::size_t N = u.size();
  for (std::size_t n : n_list)
    if (n < 4 || 2 * n > N)
      throw Error("rescaled_range: window length " + std::to_string(n) +
                  " outside [4, N/2] for N = " + std::to_string(N));

  RsCurve curve;
  const auto& v = u.values;
  for (std::size_t n : n_list) {
    const std::size_t m = N / n;
    double rs_sum = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double* w = v.data() + j * n;
      double e = 0.0;
      for (std::size_t k = 0; k < n; ++k) e += w[k];
      e /= static_cast<double>(n);

      double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = w[k] - e;
        cum += d;
        ss += d * d;
        if (k == 0) {
          lo = hi = cum;
        } else {
          lo = std::min(lo, cum);
          hi = std::max(hi, cum);
        }
      }
      const double s = std::sqrt(ss / static_cast<double>(n - 1));
      if (!(s > 0.0)) continue;
      rs_sum += (hi - lo) / s;
      ++used;
    }
    if (used == 0) {
      curve.warnings.push_back("window length " + std::to_string(n) +
                               " dropped: every window has zero deviation");
      continue;
    }
    curve.n_values.push_back(n);
    curve.rs_means.push_back(rs_sum / static_cast<double>(used));
  }

  if (curve.n_values.size() < 3)
    throw Error("rescaled_range: fewer than three usable window lengths");

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < curve.n_values.size(); ++i) {
    if (!(curve.rs_means[i] > 0.0)) continue;
    lx.push_back(std::log10(static_cast<double>(curve.n_values[i])));
    ly.push_back(std::log10(curve.rs_means[i]));
  }
  if (lx.size() < 3) throw Error("rescaled_range: fewer than three positive R/S values");
  const LineFit fit = fit_line(lx, ly);
  curve.H = fit.slope;
  curve.slope_stderr = fit.slope_stderr;
  curve.r2 = fit.r2;
  return curve;
}

std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t count) {
  if (lo == 0 || hi < lo) throw Error("log_spaced_sizes: need 0 < lo <= hi");
  std::vector<std::size_t> out;
  if (count <= 1 || hi == lo) return {lo};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double v = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    auto n = static_cast<std::size_t>(std::llround(v));
    n = std::clamp(n, lo, hi);
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  return out;
}

std::vector<std::size_t> default_window_sizes(std::size_t series_length) {
  const std::size_t hi = series_length / 4;
  if (hi < 10) throw Error("series too short for the default window range [10, N/4]");
  return log_spaced_sizes(10, hi, 16);
}

}  // namespace lrm
