#include "lrm/bda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrm/error.hpp"
#include "lrm/linear_fit.hpp"
#include "lrm/parallel.hpp"

namespace lrm {
namespace {

constexpr double kR2Tie = 1e-12;

template <class TimeAt>
CrossingSequence scan_passages(std::span<const double> x, double threshold, TimeAt time_at) {
  CrossingSequence c;
  c.threshold = threshold;
  int side = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int s = x[i] > threshold ? 1 : (x[i] < threshold ? -1 : 0);
    if (s == 0) continue;
    if (side == 0) {
      side = s;
      c.first_side = s > 0 ? Side::above : Side::below;
      continue;
    }
    if (s != side) {
      c.times.push_back(time_at(i));
      side = s;
    }
  }
  return c;
}

struct BinFit {
  LineFit line;
  std::size_t bins = 0;
};

// Fit over nonzero bins with index in [i, j].
BinFit fit_bins(const LogBinnedPdf& pdf, std::size_t i, std::size_t j,
                std::vector<double>& lx, std::vector<double>& ly) {
  lx.clear();
  ly.clear();
  for (std::size_t b = i; b <= j; ++b) {
    if (!(pdf.densities[b] > 0.0)) continue;
    lx.push_back(std::log10(pdf.center(b)));
    ly.push_back(std::log10(pdf.densities[b]));
  }
  BinFit f;
  f.bins = lx.size();
  if (f.bins >= 2) f.line = fit_line(lx, ly);
  return f;
}

double sampling_floor(std::span<const Series> segments) {
  std::vector<double> gaps;
  for (const auto& s : segments)
    for (std::size_t i = 1; i < s.size(); ++i) gaps.push_back(s.t[i] - s.t[i - 1]);
  if (gaps.empty()) return 0.0;
  return 2.0 * median(gaps);
}

BdaKindResult run_kind(DurationSet ds, const BdaOptions& options, double floor) {
  BdaKindResult r;
  const auto below = std::remove_if(ds.durations.begin(), ds.durations.end(),
                                    [&](double d) { return d < floor; });
  ds.excluded_below_floor = static_cast<std::size_t>(ds.durations.end() - below);
  ds.durations.erase(below, ds.durations.end());
  r.durations = std::move(ds);
  try {
    if (r.durations.durations.empty()) throw Error("no durations above the sampling floor");
    r.pdf = log_binned_pdf(r.durations, options.bins_per_decade);
    r.region = select_fit_region(*r.pdf, options.min_decades);
    r.fit = fit_powerlaw_region(*r.pdf, r.region->T_lo, r.region->T_hi);
    r.hurst = hurst_from_bda(*r.fit);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

CrossingSequence threshold_passages(std::span<const double> t, std::span<const double> x,
                                    double threshold) {
  if (t.size() != x.size()) throw Error("threshold_passages: t and x differ in length");
  if (x.size() < 2) throw Error("threshold_passages: need at least two samples");
  return scan_passages(x, threshold, [&](std::size_t i) { return t[i]; });
}

CrossingSequence threshold_passages(const Series& series, double threshold) {
  return threshold_passages(series.t, series.x, threshold);
}

CrossingSequence threshold_passages(const UniformSeries& series, double threshold) {
  if (series.size() < 2) throw Error("threshold_passages: need at least two samples");
  return scan_passages(series.values, threshold,
                       [&](std::size_t i) { return series.time_at(i); });
}

std::string_view to_string(DurationKind kind) {
  switch (kind) {
    case DurationKind::burst:
      return "burst";
    case DurationKind::interburst:
      return "interburst";
    case DurationKind::pooled:
      return "pooled";
  }
  return "unknown";
}

DurationPair extract_durations(const CrossingSequence& crossings, TimeDomain domain,
                               std::size_t series_length) {
  DurationPair out;
  for (DurationSet* ds : {&out.bursts, &out.interbursts}) {
    ds->threshold = crossings.threshold;
    ds->domain = domain;
    ds->series_length = series_length;
  }
  out.bursts.kind = DurationKind::burst;
  out.interbursts.kind = DurationKind::interburst;

  const auto& t = crossings.times;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double d = t[k + 1] - t[k];
    if (!(d > 0.0)) continue;
    (crossings.is_upward(k) ? out.bursts : out.interbursts).durations.push_back(d);
  }
  return out;
}

double LogBinnedPdf::center(std::size_t i) const {
  return std::sqrt(bin_edges[i] * bin_edges[i + 1]);
}

LogBinnedPdf log_binned_pdf(std::span<const double> durations, int bins_per_decade) {
  if (durations.empty()) throw Error("log_binned_pdf: no durations");
  if (bins_per_decade < 2) throw Error("log_binned_pdf: bins_per_decade must be at least 2");
  const auto [min_it, max_it] = std::minmax_element(durations.begin(), durations.end());
  const double lo = *min_it, hi = *max_it;
  if (!(lo > 0.0)) throw Error("log_binned_pdf: durations must be positive");
  if (lo == hi) throw Error("degenerate support");

  const double bpd = bins_per_decade;
  const auto bins = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::log10(hi / lo) * bpd - 1e-9)));

  LogBinnedPdf pdf;
  pdf.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    pdf.bin_edges[i] = lo * std::pow(10.0, static_cast<double>(i) / bpd);
  pdf.bin_edges.front() = lo;
  pdf.bin_edges.back() = std::max(pdf.bin_edges.back(), hi);

  pdf.counts.assign(bins, 0);
  for (double T : durations) {
    auto i = static_cast<std::size_t>(
        std::clamp(std::floor(std::log10(T / lo) * bpd), 0.0, static_cast<double>(bins - 1)));
    while (i > 0 && T < pdf.bin_edges[i]) --i;
    while (i + 1 < bins && T >= pdf.bin_edges[i + 1]) ++i;
    ++pdf.counts[i];
  }
  pdf.total = durations.size();
  pdf.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double width = pdf.bin_edges[i + 1] - pdf.bin_edges[i];
    pdf.densities[i] = static_cast<double>(pdf.counts[i]) /
                       (static_cast<double>(pdf.total) * width);
  }
  return pdf;
}

LogBinnedPdf log_binned_pdf(const DurationSet& ds, int bins_per_decade) {
  return log_binned_pdf(ds.durations, bins_per_decade);
}

PowerLawFit fit_powerlaw_region(const LogBinnedPdf& pdf, double T_lo, double T_hi) {
  if (!(T_lo < T_hi)) throw Error("fit_powerlaw_region: need T_lo < T_hi");
  std::vector<double> lx, ly;
  for (std::size_t b = 0; b < pdf.bins(); ++b) {
    const double c = pdf.center(b);
    if (c < T_lo || c > T_hi || !(pdf.densities[b] > 0.0)) continue;
    lx.push_back(std::log10(c));
    ly.push_back(std::log10(pdf.densities[b]));
  }
  if (lx.size() < 5)
    throw Error("fit_powerlaw_region: " + std::to_string(lx.size()) +
                " nonzero bins in region, need 5");
  const LineFit line = fit_line(lx, ly);
  PowerLawFit f;
  f.gamma = -line.slope;
  f.T_lo = T_lo;
  f.T_hi = T_hi;
  f.stderr = line.slope_stderr;
  f.r2 = line.r2;
  f.bins_used = lx.size();
  return f;
}

FitRegion select_fit_region(const LogBinnedPdf& pdf, double min_decades) {
  std::vector<std::size_t> nz;
  for (std::size_t b = 0; b < pdf.bins(); ++b)
    if (pdf.densities[b] > 0.0) nz.push_back(b);
  if (nz.size() < 12)
    throw Error("select_fit_region: " + std::to_string(nz.size()) +
                " nonzero bins, need 12");

  std::vector<double> lx, ly;
  bool found = false;
  double best_r2 = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0, best_j = 0;
  for (std::size_t a = 0; a < nz.size(); ++a) {
    for (std::size_t z = a + 4; z < nz.size(); ++z) {
      const std::size_t i = nz[a], j = nz[z];
      if (std::log10(pdf.center(j) / pdf.center(i)) < min_decades - 1e-9) continue;
      const BinFit f = fit_bins(pdf, i, j, lx, ly);
      const double r2 = f.line.r2;
      bool take = !found || r2 > best_r2 + kR2Tie;
      if (!take && std::fabs(r2 - best_r2) <= kR2Tie) {
        const std::size_t width = j - i, best_width = best_j - best_i;
        take = width > best_width || (width == best_width && i > best_i);
      }
      if (take) {
        found = true;
        best_r2 = r2;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (!found) return {pdf.center(nz.front()), pdf.center(nz.back()), true};
  return {pdf.center(best_i), pdf.center(best_j), false};
}

HurstEstimate hurst_from_bda(const PowerLawFit& fit) {
  return {2.0 - fit.gamma, fit.stderr, fit.gamma >= 1.0 && fit.gamma <= 2.0};
}

const BdaKindResult& BdaThresholdResult::get(DurationKind kind) const {
  switch (kind) {
    case DurationKind::burst:
      return burst;
    case DurationKind::interburst:
      return interburst;
    case DurationKind::pooled:
      return pooled;
  }
  return pooled;
}

BdaReport bda_pipeline(std::span<const Series> segments, std::span<const double> thresholds,
                       const BdaOptions& options, unsigned threads) {
  if (thresholds.empty()) throw Error("bda_pipeline: at least one threshold required");
  BdaReport report;
  report.min_duration = options.min_duration > 0.0 ? options.min_duration
                                                   : sampling_floor(segments);
  const TimeDomain domain = segments.empty() ? TimeDomain::real_time_seconds
                                             : segments.front().domain;
  std::size_t length = 0;
  for (const auto& s : segments) length += s.size();

  report.thresholds.resize(thresholds.size());
  parallel_for(thresholds.size(), threads, [&](std::size_t k) {
    const double h = thresholds[k];
    DurationPair all;
    for (DurationSet* ds : {&all.bursts, &all.interbursts}) {
      ds->threshold = h;
      ds->domain = domain;
      ds->series_length = length;
    }
    all.bursts.kind = DurationKind::burst;
    all.interbursts.kind = DurationKind::interburst;

    for (const auto& seg : segments) {
      if (seg.size() < 2) continue;
      const DurationPair p = extract_durations(threshold_passages(seg, h), domain, seg.size());
      all.bursts.durations.insert(all.bursts.durations.end(), p.bursts.durations.begin(),
                                  p.bursts.durations.end());
      all.interbursts.durations.insert(all.interbursts.durations.end(),
                                       p.interbursts.durations.begin(),
                                       p.interbursts.durations.end());
    }

    DurationSet pooled = all.bursts;
    pooled.kind = DurationKind::pooled;
    pooled.durations.insert(pooled.durations.end(), all.interbursts.durations.begin(),
                            all.interbursts.durations.end());

    BdaThresholdResult& r = report.thresholds[k];
    r.threshold = h;
    r.burst = run_kind(std::move(all.bursts), options, report.min_duration);
    r.interburst = run_kind(std::move(all.interbursts), options, report.min_duration);
    r.pooled = run_kind(std::move(pooled), options, report.min_duration);
  });
  return report;
}

BdaReport bda_pipeline(const Series& series, std::span<const double> thresholds,
                       const BdaOptions& options, unsigned threads) {
  return bda_pipeline(std::span<const Series>(&series, 1), thresholds, options, threads);
}

std::vector<double> default_thresholds(std::span<const double> values) {
  return {quantile(values, 0.45), quantile(values, 0.50), quantile(values, 0.55), 0.0};
}

}  // namespace lrm
