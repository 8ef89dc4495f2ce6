#include "lrm/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrm/error.hpp"

namespace lrm {

std::string_view to_string(TimeDomain domain) {
  switch (domain) {
    case TimeDomain::real_time_seconds:
      return "real";
    case TimeDomain::event_ticks:
      return "event";
  }
  return "unknown";
}

TimeDomain parse_time_domain(std::string_view name) {
  if (name == "real") return TimeDomain::real_time_seconds;
  if (name == "event") return TimeDomain::event_ticks;
  throw Error("unknown time domain '" + std::string(name) + "'");
}

double Series::span() const noexcept {
  if (t.size() < 2) return 0.0;
  return t.back() - t.front();
}

UniformSeries resample_uniform(const Series& series, double step) {
  if (!(step > 0.0)) throw Error("resample_uniform: step must be positive");
  if (series.empty()) throw Error("resample_uniform: series is empty");

  UniformSeries out;
  out.domain = series.domain;
  out.step = step;

  const double t0 = series.t.front();
  const double t_last = series.t.back();
  const auto grid_count =
      static_cast<std::size_t>(std::floor((t_last - t0) / step)) + 1;
  out.values.reserve(grid_count);

  std::size_t j = 0;
  for (std::size_t i = 0;; ++i) {
    const double grid_t = t0 + static_cast<double>(i) * step;
    if (grid_t > t_last) break;
    while (j + 1 < series.size() && series.t[j + 1] <= grid_t) ++j;
    out.values.push_back(series.x[j]);
  }
  return out;
}

UniformSeries cumulative_profile(const UniformSeries& u) {
  UniformSeries out;
  out.domain = u.domain;
  out.step = u.step;
  out.values.resize(u.size());
  if (u.values.empty()) return out;

  const double m = mean(u.values);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += u.values[i] - m;
    out.values[i] = acc;
  }
  return out;
}

Series to_series(const UniformSeries& u) {
  Series s;
  s.domain = u.domain;
  s.x = u.values;
  s.t.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) s.t[i] = u.time_at(i);
  return s;
}

std::vector<Series> split_days(const Series& series) {
  std::vector<std::size_t> bounds = series.origin.day_offsets;
  if (bounds.empty() || bounds.front() != 0) bounds.insert(bounds.begin(), 0);
  bounds.push_back(series.size());

  std::vector<Series> days;
  for (std::size_t d = 0; d + 1 < bounds.size(); ++d) {
    const auto lo = static_cast<std::ptrdiff_t>(bounds[d]);
    const auto hi = static_cast<std::ptrdiff_t>(bounds[d + 1]);
    if (hi <= lo) continue;
    Series day;
    day.domain = series.domain;
    day.origin.symbol = series.origin.symbol;
    day.origin.recipe = series.origin.recipe;
    day.t.assign(series.t.begin() + lo, series.t.begin() + hi);
    day.x.assign(series.x.begin() + lo, series.x.begin() + hi);
    days.push_back(std::move(day));
  }
  return days;
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw Error("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("quantile level outside [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double a = v[lo];
  if (lo + 1 >= v.size()) return a;
  const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
  return a + (h - static_cast<double>(lo)) * (b - a);
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

}  // namespace lrm
