#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lrm/series.hpp"

namespace lrm {

/// LOBSTER message type codes (column 2 of the message file).
enum class EventKind : std::uint8_t {
  submission = 1,
  cancellation = 2,
  deletion = 3,
  execution_visible = 4,
  execution_hidden = 5,
  cross_trade = 6,
  trading_halt = 7,
};

enum class Direction : std::int8_t { sell = -1, buy = 1 };

struct MessageEvent {
  double time = 0.0;  // seconds after midnight
  EventKind kind = EventKind::submission;
  std::int64_t order_id = 0;
  std::int64_t size = 0;
  std::int64_t price = 0;  // dollars * 10000
  Direction direction = Direction::buy;
};

struct MessageFile {
  std::vector<MessageEvent> events;
  std::size_t rows = 0;
  std::vector<std::string> warnings;
};

/// Parses a headerless six-column LOBSTER message file. Rows whose time
/// decreases are kept and reported in `warnings`.
MessageFile parse_message_file(const std::filesystem::path& path);

/// Prices LOBSTER writes for unoccupied levels.
inline constexpr std::int64_t kEmptyAskPrice = 9999999999;
inline constexpr std::int64_t kEmptyBidPrice = -9999999999;

struct DepthLevel {
  std::int64_t ask_price = 0;
  std::int64_t ask_volume = 0;
  std::int64_t bid_price = 0;
  std::int64_t bid_volume = 0;
};

/// One book snapshot. levels[0] is the best quote. An unoccupied level has
/// zero volume on that side and does not contribute to any sum.
struct DepthRow {
  double time = 0.0;
  std::vector<DepthLevel> levels;

  [[nodiscard]] std::int64_t total_bid_volume() const noexcept;
  [[nodiscard]] std::int64_t total_ask_volume() const noexcept;
};

/// Parses a headerless LOBSTER orderbook file with 4*levels columns.
/// Row times are left at zero; see attach_message_times.
std::vector<DepthRow> parse_orderbook_file(const std::filesystem::path& path,
                                           std::size_t levels);

/// Streaming variant; the row passed to `sink` is reused between calls.
/// Returns the number of rows read.
std::size_t for_each_depth_row(const std::filesystem::path& path, std::size_t levels,
                               const std::function<void(const DepthRow&)>& sink);

/// Copies message timestamps onto the row-aligned depth snapshots and drops
/// snapshots produced by trading-halt messages. Throws when the two files
/// disagree on the row count.
void attach_message_times(std::vector<DepthRow>& depth,
                          std::span<const MessageEvent> messages);

/// (sum bid - sum ask) / (sum bid + sum ask) over all levels.
/// Throws EmptyBookError when every volume is zero.
double compute_disbalance(const DepthRow& row);

/// Real-time dis-balance: one point per non-empty snapshot, with snapshots
/// sharing a timestamp collapsed to the last one.
Series build_disbalance_series(std::span<const DepthRow> depth);

/// Every non-empty snapshot, in order, without timestamp collapsing. Feed
/// this to to_event_time for the event-time series.
Series build_disbalance_events(std::span<const DepthRow> depth);

/// Drops everything before the first and after the last point with
/// |x| <= epsilon.
Series trim_day(const Series& series, double epsilon = 0.05);

/// Concatenates trimmed days. Day d > 0 starts one median intra-day gap after
/// the end of day d - 1; values are not modified. origin.day_offsets records
/// where each day starts.
Series stitch_days(std::span<const Series> days);

/// Replaces time stamps by the point index 0, 1, 2, ...
Series to_event_time(const Series& series);

/// Points per hour of real time.
double flow_intensity(const Series& series);

/// Mid-price (ask_1 + bid_1) / 2 in price units. Snapshots missing either
/// best quote are skipped. Real time collapses equal timestamps like
/// build_disbalance_series; event time keeps every snapshot and uses ticks.
Series midprice_series(std::span<const DepthRow> depth, TimeDomain domain);

/// |log m_i - log m_{i-1}| for consecutive grid values. The result has one
/// value fewer than the input. Throws when fewer than two grid points exist.
UniformSeries absolute_log_returns(const UniformSeries& mid);

/// midprice_series -> resample_uniform(step) -> absolute_log_returns.
UniformSeries midprice_return_series(std::span<const DepthRow> depth, double step,
                                     TimeDomain domain = TimeDomain::real_time_seconds);

/// Series derived from one day's message/orderbook pair.
struct DaySeries {
  std::string symbol;
  std::string date;
  std::size_t message_rows = 0;
  std::size_t depth_rows = 0;
  Series disbalance_real;
  Series disbalance_events;
  Series midprice_real;
  Series midprice_events;
  std::vector<std::string> warnings;
};

/// Streams one LOBSTER day pair into dis-balance and mid-price series without
/// holding the full depth table in memory.
DaySeries load_day(const std::filesystem::path& message_path,
                   const std::filesystem::path& orderbook_path, std::size_t levels);

/// Components of `<SYMBOL>_<DATE>_<start>_<end>_message_<K>.csv`.
struct LobsterFileName {
  std::string symbol;
  std::string date;
  std::string start;
  std::string end;
  std::string kind;  // "message" or "orderbook"
  std::size_t levels = 0;
};

/// Returns false when the name does not follow the LOBSTER convention.
bool parse_lobster_file_name(const std::string& file_name, LobsterFileName& out);

}  // namespace lrm
