#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lrm {

enum class TimeDomain : std::uint8_t {
  real_time_seconds = 0,
  event_ticks = 1,
};

std::string_view to_string(TimeDomain domain);
TimeDomain parse_time_domain(std::string_view name);

/// Provenance carried alongside a series. day_offsets holds the index of the
/// first point of every stitched day (or independent realization).
struct SeriesOrigin {
  std::string symbol;
  std::string first_date;
  std::string last_date;
  std::string recipe;
  std::vector<std::size_t> day_offsets;
};

/// Ordered (t, x) pairs stored column-wise.
struct Series {
  TimeDomain domain = TimeDomain::real_time_seconds;
  std::vector<double> t;
  std::vector<double> x;
  SeriesOrigin origin;

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  [[nodiscard]] bool empty() const noexcept { return x.empty(); }
  /// t_last - t_first; zero for fewer than two points.
  [[nodiscard]] double span() const noexcept;
  void push_back(double time, double value) {
    t.push_back(time);
    x.push_back(value);
  }
};

/// Values on the implied grid t_i = i * step.
struct UniformSeries {
  TimeDomain domain = TimeDomain::real_time_seconds;
  double step = 1.0;
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] double time_at(std::size_t i) const noexcept {
    return static_cast<double>(i) * step;
  }
};

/// Last-observation-carried-forward sampling on a grid anchored at the first
/// observation. Grid points past the last observation are not emitted.
UniformSeries resample_uniform(const Series& series, double step);

/// Running sum of mean-removed values.
UniformSeries cumulative_profile(const UniformSeries& u);

/// Explicit-time view of a uniform series (t_i = i * step).
Series to_series(const UniformSeries& u);

/// Splits a series at its origin.day_offsets; returns a single segment when
/// no offsets are recorded.
std::vector<Series> split_days(const Series& series);

/// Linear-interpolated sample quantile (R type 7) for p in [0, 1].
double quantile(std::span<const double> values, double p);

double mean(std::span<const double> values);
double median(std::span<const double> values);

}  // namespace lrm
