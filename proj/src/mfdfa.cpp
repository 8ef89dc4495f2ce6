#include "lrm/mfdfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrm/error.hpp"
#include "lrm/linear_fit.hpp"

namespace lrm {
namespace {

// Mean squared residual of the least-squares line through y[0..n).
double detrended_variance(const double* y, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double xc = (nn - 1.0) / 2.0;
  double sy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sy += y[k];
    sxy += (static_cast<double>(k) - xc) * y[k];
  }
  const double sxx = nn * (nn * nn - 1.0) / 12.0;
  const double ybar = sy / nn;
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = y[k] - ybar - slope * (static_cast<double>(k) - xc);
    ss += r * r;
  }
  return ss / nn;
}

}  // namespace

MfdfaSurface mfdfa(const UniformSeries& u, std::span<const std::size_t> n_list,
                   std::span<const double> q_list) {
  const std::size_t N = u.size();
  for (std::size_t n : n_list)
    if (n < 8 || 4 * n > N)
      throw Error("mfdfa: box size " + std::to_string(n) + " outside [8, N/4] for N = " +
                  std::to_string(N));
  for (double q : q_list)
    if (!std::isfinite(q)) throw Error("mfdfa: q values must be finite");

  const UniformSeries profile = cumulative_profile(u);
  const double* y = profile.values.data();

  MfdfaSurface s;
  s.q_values.assign(q_list.begin(), q_list.end());
  s.n_values.assign(n_list.begin(), n_list.end());
  s.F.assign(s.q_values.size() * s.n_values.size(), 0.0);

  std::vector<double> f2;
  for (std::size_t ni = 0; ni < s.n_values.size(); ++ni) {
    const std::size_t n = s.n_values[ni];
    const std::size_t m = N / n;
    f2.clear();
    for (std::size_t j = 0; j < m; ++j) f2.push_back(detrended_variance(y + j * n, n));
    for (std::size_t j = 0; j < m; ++j) f2.push_back(detrended_variance(y + N - (j + 1) * n, n));

    const auto zeros = static_cast<std::size_t>(std::count(f2.begin(), f2.end(), 0.0));
    if (zeros > 0)
      s.warnings.push_back("box size " + std::to_string(n) + ": " + std::to_string(zeros) +
                           " boxes with zero fluctuation excluded for q <= 0");

    for (std::size_t qi = 0; qi < s.q_values.size(); ++qi) {
      const double q = s.q_values[qi];
      double acc = 0.0;
      std::size_t used = 0;
      for (double v : f2) {
        if (q <= 0.0 && v == 0.0) continue;
        acc += q == 0.0 ? std::log(v) : std::pow(v, q / 2.0);
        ++used;
      }
      double F = std::numeric_limits<double>::quiet_NaN();
      if (used > 0) {
        const double avg = acc / static_cast<double>(used);
        F = q == 0.0 ? std::exp(avg / 2.0) : std::pow(avg, 1.0 / q);
      }
      s.F[qi * s.n_values.size() + ni] = F;
    }
  }

  if (s.n_values.size() >= 3) s.hurst = generalized_hurst(s);
  return s;
}

std::vector<GeneralizedHurst> generalized_hurst(const MfdfaSurface& surface) {
  if (surface.n_values.size() < 3)
    throw Error("generalized_hurst: need at least three box sizes");

  std::vector<GeneralizedHurst> out;
  for (std::size_t qi = 0; qi < surface.q_values.size(); ++qi) {
    GeneralizedHurst g;
    g.q = surface.q_values[qi];
    std::vector<double> lx, ly;
    for (std::size_t ni = 0; ni < surface.n_values.size(); ++ni) {
      const double F = surface.at(qi, ni);
      if (!(F > 0.0) || !std::isfinite(F)) continue;
      lx.push_back(std::log10(static_cast<double>(surface.n_values[ni])));
      ly.push_back(std::log10(F));
    }
    const bool degenerate =
        lx.size() < 3 || std::all_of(ly.begin(), ly.end(), [&](double v) { return v == ly[0]; });
    if (!degenerate) {
      const LineFit fit = fit_line(lx, ly);
      g.H = fit.slope;
      g.stderr = fit.slope_stderr;
    }
    out.push_back(g);
  }
  return out;
}

std::vector<double> default_q_values() {
  return {-4.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0};
}

}  // namespace lrm
