#include "lrm/lob.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <string_view>

#include "lrm/error.hpp"

namespace lrm {

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

// Splits `line` on commas into `fields`; returns the field count.
std::size_t split_csv(std::string_view line, std::vector<std::string_view>& fields) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !text.empty();
}

// Integer columns occasionally come out of spreadsheets as "100.0".
bool parse_integer(std::string_view text, std::int64_t& out) {
  if (parse_number(text, out)) return true;
  double d = 0.0;
  if (!parse_number(text, d) || !std::isfinite(d) || d != std::floor(d)) return false;
  if (std::fabs(d) > 9.2e18) return false;
  out = static_cast<std::int64_t>(d);
  return true;
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path.string()), in_(path) {
    if (!in_) throw Error("cannot open " + path_);
  }

  // Advances to the next non-blank line.
  bool next(std::string_view& line) {
    while (std::getline(in_, buffer_)) {
      ++line_number_;
      std::string_view v = trim(buffer_);
      if (v.empty()) continue;
      line = v;
      return true;
    }
    return false;
  }

  [[nodiscard]] std::size_t line_number() const noexcept { return line_number_; }
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::string buffer_;
  std::size_t line_number_ = 0;
};

MessageEvent parse_message_row(const LineReader& reader,
                               const std::vector<std::string_view>& f) {
  const auto fail = [&](const std::string& what) {
    return ParseError(reader.path(), reader.line_number(), what);
  };
  if (f.size() != 6)
    throw fail("expected 6 columns, found " + std::to_string(f.size()));

  MessageEvent ev;
  std::int64_t type = 0, direction = 0;
  if (!parse_number(f[0], ev.time) || !std::isfinite(ev.time)) throw fail("bad time field");
  if (!parse_integer(f[1], type) || type < 1 || type > 7) throw fail("bad event type");
  if (!parse_integer(f[2], ev.order_id)) throw fail("bad order id");
  if (!parse_integer(f[3], ev.size) || ev.size < 0) throw fail("bad size");
  if (!parse_integer(f[4], ev.price)) throw fail("bad price");
  if (!parse_integer(f[5], direction) || (direction != 1 && direction != -1))
    throw fail("bad direction");
  ev.kind = static_cast<EventKind>(type);
  ev.direction = direction > 0 ? Direction::buy : Direction::sell;
  // Halt rows encode the halt state in the price column (-1, 0, 1).
  if (ev.price < 0 && ev.kind != EventKind::trading_halt) throw fail("negative price");
  return ev;
}

void parse_depth_row(const LineReader& reader, const std::vector<std::string_view>& f,
                     std::size_t levels, DepthRow& row) {
  const auto fail = [&](const std::string& what) {
    return ParseError(reader.path(), reader.line_number(), what);
  };
  if (f.size() != 4 * levels)
    throw fail("expected " + std::to_string(4 * levels) + " columns, found " +
               std::to_string(f.size()));

  row.levels.resize(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    DepthLevel& lv = row.levels[k];
    if (!parse_integer(f[4 * k], lv.ask_price) || !parse_integer(f[4 * k + 1], lv.ask_volume) ||
        !parse_integer(f[4 * k + 2], lv.bid_price) || !parse_integer(f[4 * k + 3], lv.bid_volume))
      throw fail("non-numeric field at level " + std::to_string(k + 1));
    if (lv.ask_volume < 0 || lv.bid_volume < 0)
      throw fail("negative volume at level " + std::to_string(k + 1));
    if (lv.ask_price == kEmptyAskPrice || lv.ask_price == kEmptyBidPrice) lv.ask_volume = 0;
    if (lv.bid_price == kEmptyBidPrice || lv.bid_price == kEmptyAskPrice) lv.bid_volume = 0;
  }
}

bool has_best_quotes(const DepthRow& row) {
  return !row.levels.empty() && row.levels[0].ask_volume > 0 && row.levels[0].bid_volume > 0;
}

double mid_of(const DepthRow& row) {
  return 0.5 * (static_cast<double>(row.levels[0].ask_price) +
                static_cast<double>(row.levels[0].bid_price));
}

// Appends (t, x), overwriting the previous point when it shares the timestamp.
void push_collapsed(Series& s, double t, double x) {
  if (!s.t.empty() && s.t.back() == t) {
    s.x.back() = x;
    return;
  }
  s.push_back(t, x);
}

void check_bounded(const Series& s) {
  for (double v : s.x)
    if (!(v >= -1.0 && v <= 1.0)) throw Error("dis-balance value outside [-1, 1]");
}

}  // namespace

std::int64_t DepthRow::total_bid_volume() const noexcept {
  std::int64_t sum = 0;
  for (const auto& lv : levels) sum += lv.bid_volume;
  return sum;
}

std::int64_t DepthRow::total_ask_volume() const noexcept {
  std::int64_t sum = 0;
  for (const auto& lv : levels) sum += lv.ask_volume;
  return sum;
}

MessageFile parse_message_file(const std::filesystem::path& path) {
  LineReader reader(path);
  MessageFile out;
  std::vector<std::string_view> fields;
  std::string_view line;
  while (reader.next(line)) {
    split_csv(line, fields);
    MessageEvent ev = parse_message_row(reader, fields);
    if (!out.events.empty() && ev.time < out.events.back().time)
      out.warnings.push_back(reader.path() + ":" + std::to_string(reader.line_number()) +
                             ": time decreases");
    out.events.push_back(ev);
  }
  out.rows = out.events.size();
  return out;
}

std::size_t for_each_depth_row(const std::filesystem::path& path, std::size_t levels,
                               const std::function<void(const DepthRow&)>& sink) {
  if (levels == 0) throw Error("orderbook level count must be positive");
  LineReader reader(path);
  std::vector<std::string_view> fields;
  std::string_view line;
  DepthRow row;
  std::size_t count = 0;
  while (reader.next(line)) {
    split_csv(line, fields);
    parse_depth_row(reader, fields, levels, row);
    row.time = 0.0;
    sink(row);
    ++count;
  }
  return count;
}

std::vector<DepthRow> parse_orderbook_file(const std::filesystem::path& path,
                                           std::size_t levels) {
  std::vector<DepthRow> rows;
  for_each_depth_row(path, levels, [&](const DepthRow& r) { rows.push_back(r); });
  return rows;
}

void attach_message_times(std::vector<DepthRow>& depth, std::span<const MessageEvent> messages) {
  if (depth.size() != messages.size())
    throw Error("orderbook has " + std::to_string(depth.size()) + " rows but message file has " +
                std::to_string(messages.size()));
  std::size_t keep = 0;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (messages[i].kind == EventKind::trading_halt) continue;
    depth[i].time = messages[i].time;
    if (keep != i) depth[keep] = std::move(depth[i]);
    ++keep;
  }
  depth.resize(keep);
}

double compute_disbalance(const DepthRow& row) {
  const auto bid = static_cast<double>(row.total_bid_volume());
  const auto ask = static_cast<double>(row.total_ask_volume());
  const double total = bid + ask;
  if (!(total > 0.0)) throw EmptyBookError();
  return (bid - ask) / total;
}

Series build_disbalance_series(std::span<const DepthRow> depth) {
  Series s;
  s.domain = TimeDomain::real_time_seconds;
  s.origin.recipe = "disbalance";
  for (const auto& row : depth) {
    if (row.total_bid_volume() + row.total_ask_volume() == 0) continue;
    push_collapsed(s, row.time, compute_disbalance(row));
  }
  check_bounded(s);
  return s;
}

Series build_disbalance_events(std::span<const DepthRow> depth) {
  Series s;
  s.domain = TimeDomain::real_time_seconds;
  s.origin.recipe = "disbalance";
  for (const auto& row : depth) {
    if (row.total_bid_volume() + row.total_ask_volume() == 0) continue;
    s.push_back(row.time, compute_disbalance(row));
  }
  check_bounded(s);
  return s;
}

Series trim_day(const Series& series, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("trim_day: epsilon must be positive");
  const auto near_zero = [&](double v) { return std::fabs(v) <= epsilon; };
  const auto first = std::find_if(series.x.begin(), series.x.end(), near_zero);
  if (first == series.x.end())
    throw Error("series never near zero at tolerance " + std::to_string(epsilon));
  const auto last = std::find_if(series.x.rbegin(), series.x.rend(), near_zero);

  const auto lo = first - series.x.begin();
  const auto hi = series.x.rend() - last;  // one past the last qualifying point
  Series out;
  out.domain = series.domain;
  out.origin = series.origin;
  out.origin.day_offsets.clear();
  out.t.assign(series.t.begin() + lo, series.t.begin() + hi);
  out.x.assign(series.x.begin() + lo, series.x.begin() + hi);
  return out;
}

Series stitch_days(std::span<const Series> days) {
  Series out;
  if (days.empty()) return out;
  out.domain = days.front().domain;
  out.origin.symbol = days.front().origin.symbol;
  out.origin.recipe = days.front().origin.recipe;
  out.origin.first_date = days.front().origin.first_date;
  out.origin.last_date = days.back().origin.last_date;

  std::vector<double> gaps;
  std::size_t total = 0;
  for (const auto& d : days) {
    total += d.size();
    for (std::size_t i = 1; i < d.size(); ++i) gaps.push_back(d.t[i] - d.t[i - 1]);
  }
  double gap = gaps.empty() ? 1.0 : median(gaps);
  if (!(gap > 0.0)) gap = 1.0;

  out.t.reserve(total);
  out.x.reserve(total);
  bool started = false;
  for (const auto& d : days) {
    if (d.empty()) continue;
    out.origin.day_offsets.push_back(out.size());
    const double shift = started ? (out.t.back() + gap) - d.t.front() : 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) out.push_back(d.t[i] + shift, d.x[i]);
    started = true;
  }
  return out;
}

Series to_event_time(const Series& series) {
  Series out;
  out.domain = TimeDomain::event_ticks;
  out.origin = series.origin;
  out.x = series.x;
  out.t.resize(series.size());
  for (std::size_t i = 0; i < out.t.size(); ++i) out.t[i] = static_cast<double>(i);
  return out;
}

double flow_intensity(const Series& series) {
  const double span = series.span();
  if (!(span > 0.0)) throw Error("flow_intensity: series spans zero time");
  return static_cast<double>(series.size()) / (span / 3600.0);
}

Series midprice_series(std::span<const DepthRow> depth, TimeDomain domain) {
  Series s;
  s.domain = domain;
  s.origin.recipe = "midprice";
  for (const auto& row : depth) {
    if (!has_best_quotes(row)) continue;
    if (domain == TimeDomain::real_time_seconds)
      push_collapsed(s, row.time, mid_of(row));
    else
      s.push_back(static_cast<double>(s.size()), mid_of(row));
  }
  return s;
}

UniformSeries absolute_log_returns(const UniformSeries& mid) {
  if (mid.size() < 2) throw Error("absolute returns need at least two grid points");
  UniformSeries out;
  out.domain = mid.domain;
  out.step = mid.step;
  out.values.resize(mid.size() - 1);
  for (std::size_t i = 1; i < mid.size(); ++i) {
    if (!(mid.values[i] > 0.0 && mid.values[i - 1] > 0.0))
      throw Error("mid-price must be positive for log returns");
    out.values[i - 1] = std::fabs(std::log(mid.values[i]) - std::log(mid.values[i - 1]));
  }
  return out;
}

UniformSeries midprice_return_series(std::span<const DepthRow> depth, double step,
                                     TimeDomain domain) {
  if (!(step > 0.0)) throw Error("midprice_return_series: step must be positive");
  const Series mid = midprice_series(depth, domain);
  if (mid.empty()) throw Error("no snapshot carries both best quotes");
  return absolute_log_returns(resample_uniform(mid, step));
}

DaySeries load_day(const std::filesystem::path& message_path,
                   const std::filesystem::path& orderbook_path, std::size_t levels) {
  DaySeries day;
  MessageFile messages = parse_message_file(message_path);
  day.message_rows = messages.rows;
  day.warnings = std::move(messages.warnings);

  LobsterFileName name;
  if (parse_lobster_file_name(message_path.filename().string(), name)) {
    day.symbol = name.symbol;
    day.date = name.date;
  }

  day.disbalance_real.origin.recipe = day.disbalance_events.origin.recipe = "disbalance";
  day.midprice_real.origin.recipe = day.midprice_events.origin.recipe = "midprice";
  day.midprice_events.domain = TimeDomain::event_ticks;

  std::size_t index = 0;
  const auto& events = messages.events;
  day.depth_rows = for_each_depth_row(orderbook_path, levels, [&](const DepthRow& row) {
    const std::size_t i = index++;
    if (i >= events.size()) return;  // reported below
    if (events[i].kind == EventKind::trading_halt) return;
    const double t = events[i].time;
    if (row.total_bid_volume() + row.total_ask_volume() > 0) {
      const double x = compute_disbalance(row);
      day.disbalance_events.push_back(t, x);
      push_collapsed(day.disbalance_real, t, x);
    }
    if (has_best_quotes(row)) {
      const double m = mid_of(row);
      day.midprice_events.push_back(static_cast<double>(day.midprice_events.size()), m);
      push_collapsed(day.midprice_real, t, m);
    }
  });
  if (day.depth_rows != day.message_rows)
    throw Error(orderbook_path.string() + " has " + std::to_string(day.depth_rows) +
                " rows but " + message_path.string() + " has " +
                std::to_string(day.message_rows));
  check_bounded(day.disbalance_real);
  check_bounded(day.disbalance_events);
  for (Series* s : {&day.disbalance_real, &day.disbalance_events, &day.midprice_real,
                    &day.midprice_events}) {
    s->origin.symbol = day.symbol;
    s->origin.first_date = s->origin.last_date = day.date;
  }
  return day;
}

bool parse_lobster_file_name(const std::string& file_name, LobsterFileName& out) {
  static const std::regex pattern(
      R"(^([A-Za-z0-9.\-]+)_(\d{4}-\d{2}-\d{2})_(\d+)_(\d+)_(message|orderbook)_(\d+)\.csv$)");
  std::smatch m;
  if (!std::regex_match(file_name, m, pattern)) return false;
  out.symbol = m[1];
  out.date = m[2];
  out.start = m[3];
  out.end = m[4];
  out.kind = m[5];
  out.levels = static_cast<std::size_t>(std::stoul(m[6]));
  return true;
}

}  // namespace lrm
