#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrm/estimate.hpp"
#include "lrm/series.hpp"

namespace lrm {

enum class Side : std::int8_t { below = -1, above = 1 };

/// Threshold passage instants. Passages alternate in direction; the first one
/// leaves `first_side`.
struct CrossingSequence {
  double threshold = 0.0;
  std::vector<double> times;
  Side first_side = Side::below;

  /// True when passage k goes from below to above the threshold.
  [[nodiscard]] bool is_upward(std::size_t k) const noexcept {
    return (first_side == Side::below) == (k % 2 == 0);
  }
};

/// A passage is recorded at the first sample observed on the opposite side of
/// h. Samples exactly equal to h keep the side of the previous sample, so
/// touching the threshold is never a passage. Leading samples equal to h have
/// no side and are ignored.
CrossingSequence threshold_passages(std::span<const double> t, std::span<const double> x,
                                    double threshold);
CrossingSequence threshold_passages(const Series& series, double threshold);
CrossingSequence threshold_passages(const UniformSeries& series, double threshold);

enum class DurationKind : std::uint8_t { burst, interburst, pooled };
std::string_view to_string(DurationKind kind);

struct DurationSet {
  DurationKind kind = DurationKind::burst;
  std::vector<double> durations;
  double threshold = 0.0;
  TimeDomain domain = TimeDomain::real_time_seconds;
  std::size_t series_length = 0;
  std::size_t excluded_below_floor = 0;
};

struct DurationPair {
  DurationSet bursts;
  DurationSet interbursts;
};

/// Upward-to-downward passage gaps are bursts, downward-to-upward gaps are
/// inter-bursts. The open segments before the first and after the last
/// passage are discarded.
DurationPair extract_durations(const CrossingSequence& crossings,
                               TimeDomain domain = TimeDomain::real_time_seconds,
                               std::size_t series_length = 0);

/// Histogram on geometric bins. densities[i] = counts[i] / (total * width_i),
/// so sum(densities * widths) == 1.
struct LogBinnedPdf {
  std::vector<double> bin_edges;  // size = bins + 1
  std::vector<double> densities;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  [[nodiscard]] std::size_t bins() const noexcept { return densities.size(); }
  /// Geometric bin centre sqrt(lo * hi).
  [[nodiscard]] double center(std::size_t i) const;
};

/// Bins of constant log width 1/bins_per_decade starting at min(T); the last
/// bin is closed on the right so max(T) is always counted. Empty bins are
/// kept with zero density. Throws on a single distinct value.
LogBinnedPdf log_binned_pdf(std::span<const double> durations, int bins_per_decade = 10);
LogBinnedPdf log_binned_pdf(const DurationSet& ds, int bins_per_decade = 10);

struct PowerLawFit {
  double gamma = 0.0;  // P(T) ~ T^-gamma
  double T_lo = 0.0;
  double T_hi = 0.0;
  double stderr = 0.0;
  double r2 = 0.0;
  std::size_t bins_used = 0;
};

/// Least-squares line through (lg centre, lg density) of the nonzero bins
/// whose centre lies in [T_lo, T_hi]. Needs at least five such bins.
PowerLawFit fit_powerlaw_region(const LogBinnedPdf& pdf, double T_lo, double T_hi);

struct FitRegion {
  double T_lo = 0.0;
  double T_hi = 0.0;
  bool fallback = false;  // no window spanned min_decades; full support used
};

/// Scans every contiguous bin window spanning at least `min_decades` (by bin
/// centre) with at least five nonzero bins and returns the one whose log-log
/// fit has the largest r2. Ties go to the wider window, then the larger T_lo.
/// Needs at least 12 nonzero bins.
FitRegion select_fit_region(const LogBinnedPdf& pdf, double min_decades = 2.0);

/// H = 2 - gamma; flagged out of range unless 1 <= gamma <= 2.
HurstEstimate hurst_from_bda(const PowerLawFit& fit);

struct BdaOptions {
  int bins_per_decade = 10;
  /// Durations shorter than this are left out of the PDF. Zero selects two
  /// sampling intervals (median inter-sample gap) of the input.
  double min_duration = 0.0;
  double min_decades = 2.0;
};

struct BdaKindResult {
  DurationSet durations;
  std::optional<LogBinnedPdf> pdf;
  std::optional<FitRegion> region;
  std::optional<PowerLawFit> fit;
  std::optional<HurstEstimate> hurst;
  std::string error;  // non-empty when the chain stopped early

  [[nodiscard]] bool ok() const noexcept { return hurst.has_value(); }
};

struct BdaThresholdResult {
  double threshold = 0.0;
  BdaKindResult burst;
  BdaKindResult interburst;
  BdaKindResult pooled;  // bursts and inter-bursts together

  [[nodiscard]] const BdaKindResult& get(DurationKind kind) const;
};

struct BdaReport {
  std::vector<BdaThresholdResult> thresholds;
  double min_duration = 0.0;
};

/// passages -> durations -> log-binned PDF -> fit region -> power-law fit -> H
/// for every threshold and duration kind. Durations from separate segments
/// (days or independent realizations) are pooled; no duration spans two
/// segments. Failures are recorded per kind and never abort other thresholds.
BdaReport bda_pipeline(std::span<const Series> segments, std::span<const double> thresholds,
                       const BdaOptions& options = {}, unsigned threads = 1);
BdaReport bda_pipeline(const Series& series, std::span<const double> thresholds,
                       const BdaOptions& options = {}, unsigned threads = 1);

/// Empirical quantiles {0.45, 0.5, 0.55} of the values, then 0.
std::vector<double> default_thresholds(std::span<const double> values);

}  // namespace lrm
