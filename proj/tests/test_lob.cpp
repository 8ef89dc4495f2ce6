#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lrm/error.hpp"
#include "lrm/lob.hpp"
#include "test_util.hpp"

using namespace lrm;
using lrm::testing::TempDir;
using lrm::testing::write_text;

namespace {

DepthRow book(std::vector<std::int64_t> bids, std::vector<std::int64_t> asks, double t = 0.0) {
  DepthRow r;
  r.time = t;
  for (std::size_t k = 0; k < bids.size(); ++k) {
    DepthLevel lv;
    lv.ask_price = 100 + static_cast<std::int64_t>(k);
    lv.bid_price = 99 - static_cast<std::int64_t>(k);
    lv.ask_volume = asks[k];
    lv.bid_volume = bids[k];
    r.levels.push_back(lv);
  }
  return r;
}

Series series_of(std::vector<double> t, std::vector<double> x) {
  Series s;
  s.t = std::move(t);
  s.x = std::move(x);
  return s;
}

}  // namespace

TEST(MessageFile, ParsesDocumentedColumns) {
  TempDir dir;
  write_text(dir / "m.csv", "34200.189,1,11885113,21,2238100,1\n34200.190,4,11885113,5,2238100,-1\n");
  const auto m = parse_message_file(dir / "m.csv");
  ASSERT_EQ(m.rows, 2u);
  const auto& e = m.events[0];
  EXPECT_DOUBLE_EQ(e.time, 34200.189);
  EXPECT_EQ(e.kind, EventKind::submission);
  EXPECT_EQ(e.order_id, 11885113);
  EXPECT_EQ(e.size, 21);
  EXPECT_EQ(e.price, 2238100);
  EXPECT_EQ(e.direction, Direction::buy);
  EXPECT_EQ(m.events[1].kind, EventKind::execution_visible);
  EXPECT_EQ(m.events[1].direction, Direction::sell);
  EXPECT_TRUE(m.warnings.empty());
}

TEST(MessageFile, EmptyFile) {
  TempDir dir;
  write_text(dir / "m.csv", "");
  const auto m = parse_message_file(dir / "m.csv");
  EXPECT_EQ(m.rows, 0u);
  EXPECT_TRUE(m.events.empty());
}

TEST(MessageFile, WrongColumnCountNamesLine) {
  TempDir dir;
  write_text(dir / "m.csv", "34200.1,1,1,10,100,1\n34200.2,1,2,10,100\n");
  try {
    parse_message_file(dir / "m.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}

TEST(MessageFile, DecreasingTimeIsKeptWithWarning) {
  TempDir dir;
  write_text(dir / "m.csv", "10.0,1,1,10,100,1\n9.5,1,2,10,100,1\n11.0,1,3,10,100,1\n");
  const auto m = parse_message_file(dir / "m.csv");
  EXPECT_EQ(m.rows, 3u);
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NE(m.warnings[0].find(":2:"), std::string::npos);
}

TEST(MessageFile, HaltRowsAcceptNegativePrice) {
  TempDir dir;
  write_text(dir / "m.csv", "10.0,7,0,0,-1,-1\n");
  EXPECT_EQ(parse_message_file(dir / "m.csv").events[0].kind, EventKind::trading_halt);
  write_text(dir / "n.csv", "10.0,1,0,5,-1,-1\n");
  EXPECT_THROW(parse_message_file(dir / "n.csv"), ParseError);
}

TEST(MessageFile, MissingFile) {
  EXPECT_THROW(parse_message_file("/nonexistent/file.csv"), Error);
}

TEST(OrderbookFile, SingleLevelRow) {
  TempDir dir;
  write_text(dir / "o.csv", "2239500,100,2231800,100\n");
  const auto rows = parse_orderbook_file(dir / "o.csv", 1);
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_EQ(rows[0].levels.size(), 1u);
  EXPECT_EQ(rows[0].levels[0].ask_price, 2239500);
  EXPECT_EQ(rows[0].levels[0].ask_volume, 100);
  EXPECT_EQ(rows[0].levels[0].bid_price, 2231800);
  EXPECT_EQ(rows[0].levels[0].bid_volume, 100);
}

TEST(OrderbookFile, SentinelLevelHasZeroVolume) {
  std::ostringstream row;
  for (int k = 0; k < 9; ++k)
    row << (k ? "," : "") << 2239500 + k * 100 << ",10," << 2231800 - k * 100 << ",20";
  row << ",9999999999,5,-9999999999,7\n";
  TempDir dir;
  write_text(dir / "o.csv", row.str());
  const auto rows = parse_orderbook_file(dir / "o.csv", 10);
  ASSERT_EQ(rows[0].levels.size(), 10u);
  EXPECT_EQ(rows[0].levels[9].ask_volume, 0);
  EXPECT_EQ(rows[0].levels[9].bid_volume, 0);
  EXPECT_EQ(rows[0].total_ask_volume(), 90);
  EXPECT_EQ(rows[0].total_bid_volume(), 180);
}

TEST(OrderbookFile, ColumnCountMismatch) {
  std::ostringstream row;
  for (int c = 0; c < 38; ++c) row << (c ? "," : "") << 100 + c;
  TempDir dir;
  write_text(dir / "o.csv", row.str() + "\n");
  EXPECT_THROW(parse_orderbook_file(dir / "o.csv", 10), ParseError);
}

TEST(OrderbookFile, NegativeVolume) {
  TempDir dir;
  write_text(dir / "o.csv", "2239500,-1,2231800,100\n");
  EXPECT_THROW(parse_orderbook_file(dir / "o.csv", 1), ParseError);
}

TEST(Disbalance, Examples) {
  EXPECT_DOUBLE_EQ(compute_disbalance(book({4, 2}, {1, 1})), 0.5);
  EXPECT_DOUBLE_EQ(compute_disbalance(book({3, 5, 7}, {3, 5, 7})), 0.0);
  EXPECT_DOUBLE_EQ(compute_disbalance(book({3, 1}, {0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(compute_disbalance(book({0, 0}, {2, 9})), -1.0);
  EXPECT_THROW(compute_disbalance(book({0, 0}, {0, 0})), EmptyBookError);
}

TEST(Disbalance, AntisymmetricAndBounded) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> vol(0, 5000);
  for (int rep = 0; rep < 2000; ++rep) {
    std::vector<std::int64_t> b(10), a(10);
    for (int k = 0; k < 10; ++k) {
      b[k] = vol(rng);
      a[k] = vol(rng);
    }
    if (std::all_of(b.begin(), b.end(), [](auto v) { return v == 0; }) &&
        std::all_of(a.begin(), a.end(), [](auto v) { return v == 0; }))
      continue;
    const double x = compute_disbalance(book(b, a));
    const double y = compute_disbalance(book(a, b));
    EXPECT_EQ(x, -y);
    EXPECT_GE(x, -1.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(DisbalanceSeries, OnePointPerTime) {
  std::vector<DepthRow> rows{book({2}, {1}, 1.0), book({1}, {1}, 2.0), book({1}, {3}, 3.0)};
  const auto s = build_disbalance_series(rows);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.t, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(DisbalanceSeries, EqualTimestampsCollapseToLast) {
  std::vector<DepthRow> rows{book({3}, {1}, 1.0), book({1}, {3}, 1.0)};
  const auto s = build_disbalance_series(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s.x[0], -0.5);
  EXPECT_EQ(build_disbalance_events(rows).size(), 2u);
}

TEST(DisbalanceSeries, EmptyInputAndEmptyBooks) {
  EXPECT_TRUE(build_disbalance_series({}).empty());
  std::vector<DepthRow> rows{book({0}, {0}, 1.0), book({1}, {0}, 2.0)};
  const auto s = build_disbalance_series(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.t[0], 2.0);
}

TEST(TrimDay, DropsOuterSegments) {
  const auto s = trim_day(series_of({0, 1, 2, 3, 4}, {0.4, 0.03, 0.5, -0.02, 0.6}), 0.05);
  EXPECT_EQ(s.x, (std::vector<double>{0.03, 0.5, -0.02}));
  EXPECT_EQ(s.t, (std::vector<double>{1, 2, 3}));
}

TEST(TrimDay, AlreadyAnchoredIsUnchanged) {
  const auto in = series_of({0, 1, 2, 3}, {0.0, 0.7, -0.4, 0.0});
  const auto s = trim_day(in);
  EXPECT_EQ(s.x, in.x);
  EXPECT_EQ(s.t, in.t);
}

TEST(TrimDay, NeverNearZero) {
  EXPECT_THROW(trim_day(series_of({0, 1}, {0.9, 0.8}), 0.05), Error);
  EXPECT_THROW(trim_day(series_of({0}, {0.0}), 0.0), Error);
}

TEST(StitchDays, TwoSinglePointDays) {
  std::vector<Series> days{series_of({5.0}, {0.1}), series_of({2.0}, {0.2})};
  const auto s = stitch_days(days);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_LT(s.t[0], s.t[1]);
  EXPECT_EQ(s.x, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(s.origin.day_offsets, (std::vector<std::size_t>{0, 1}));
}

TEST(StitchDays, SingleDayIdentity) {
  std::vector<Series> days{series_of({34200, 34201, 34203}, {0.0, 0.3, -0.1})};
  const auto s = stitch_days(days);
  EXPECT_EQ(s.t, days[0].t);
  EXPECT_EQ(s.x, days[0].x);
}

TEST(StitchDays, EmptyList) { EXPECT_TRUE(stitch_days({}).empty()); }

TEST(StitchDays, MedianGapBetweenDays) {
  std::vector<Series> days{series_of({100, 102, 104}, {0, 1, 0}),
                           series_of({100, 102, 103}, {0, -1, 0})};
  const auto s = stitch_days(days);
  EXPECT_EQ(s.t, (std::vector<double>{100, 102, 104, 106, 108, 109}));
}

TEST(StitchDays, LengthAndMonotonicity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  std::vector<Series> days;
  std::size_t total = 0;
  for (int d = 0; d < 12; ++d) {
    Series s;
    double t = 34200.0 + u(rng);
    const int n = 1 + static_cast<int>(u(rng) * 40);
    for (int i = 0; i < n; ++i) {
      s.push_back(t, u(rng) / 5.0);
      t += u(rng);
    }
    total += s.size();
    days.push_back(std::move(s));
  }
  const auto s = stitch_days(days);
  EXPECT_EQ(s.size(), total);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s.t[i - 1], s.t[i]);
  EXPECT_EQ(s.origin.day_offsets.size(), days.size());
}

TEST(EventTime, Ticks) {
  const auto s = to_event_time(series_of({1.5, 2.7, 9.1}, {0.1, -0.2, 0.3}));
  EXPECT_EQ(s.t, (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(s.x, (std::vector<double>{0.1, -0.2, 0.3}));
  EXPECT_EQ(s.domain, TimeDomain::event_ticks);
  EXPECT_TRUE(to_event_time(Series{}).empty());
  const auto twice = to_event_time(s);
  EXPECT_EQ(twice.t, s.t);
  EXPECT_EQ(twice.x, s.x);
}

TEST(FlowIntensity, PointsPerHour) {
  Series s;
  for (int i = 0; i < 3600; ++i) s.push_back(i * (3600.0 / 3599.0), 0.0);
  EXPECT_NEAR(flow_intensity(s), 3600.0, 1e-9);
  EXPECT_THROW(flow_intensity(series_of({1.0}, {0.0})), Error);
  EXPECT_THROW(flow_intensity(series_of({1.0, 1.0}, {0.0, 0.1})), Error);
}

TEST(Midprice, ConstantGivesZeroReturns) {
  std::vector<DepthRow> rows;
  for (int i = 0; i < 20; ++i) rows.push_back(book({5}, {5}, i));
  const auto r = midprice_return_series(rows, 2.0);
  EXPECT_EQ(r.size(), 9u);
  for (double v : r.values) EXPECT_EQ(v, 0.0);
}

TEST(Midprice, DoublingStep) {
  DepthRow a = book({5}, {5}, 0.0), b = book({5}, {5}, 1.0);
  a.levels[0].ask_price = 101;
  a.levels[0].bid_price = 99;
  b.levels[0].ask_price = 202;
  b.levels[0].bid_price = 198;
  std::vector<DepthRow> rows{a, b};
  const auto r = midprice_return_series(rows, 1.0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r.values[0], std::log(2.0), 1e-15);
}

TEST(Midprice, TooShort) {
  std::vector<DepthRow> rows{book({5}, {5}, 0.0)};
  EXPECT_THROW(midprice_return_series(rows, 1.0), Error);
}

TEST(LobsterName, Parses) {
  LobsterFileName n;
  ASSERT_TRUE(parse_lobster_file_name("AAPL_2012-06-21_34200000_57600000_orderbook_10.csv", n));
  EXPECT_EQ(n.symbol, "AAPL");
  EXPECT_EQ(n.date, "2012-06-21");
  EXPECT_EQ(n.kind, "orderbook");
  EXPECT_EQ(n.levels, 10u);
  EXPECT_FALSE(parse_lobster_file_name("notes.txt", n));
  EXPECT_FALSE(parse_lobster_file_name("AAPL_2012-06-21_message_10.csv", n));
}

TEST(LoadDay, AlignsRowsAndSkipsHalts) {
  TempDir dir;
  const auto msg = dir / "TEST_2012-06-21_34200000_57600000_message_2.csv";
  const auto ob = dir / "TEST_2012-06-21_34200000_57600000_orderbook_2.csv";
  write_text(msg,
             "34200.0,1,1,10,1000,1\n"
             "34200.5,1,2,10,1001,-1\n"
             "34200.5,1,3,10,1002,-1\n"
             "34201.0,7,0,0,-1,-1\n"
             "34202.0,3,2,10,1001,-1\n");
  write_text(ob,
             "1001,10,999,10,1002,5,998,5\n"
             "1001,20,999,10,1002,5,998,5\n"
             "1001,20,999,10,1002,15,998,5\n"
             "1001,20,999,10,1002,15,998,5\n"
             "1001,10,999,10,1002,15,998,5\n");
  const DaySeries d = load_day(msg, ob, 2);
  EXPECT_EQ(d.symbol, "TEST");
  EXPECT_EQ(d.date, "2012-06-21");
  EXPECT_EQ(d.message_rows, d.depth_rows);
  EXPECT_EQ(d.disbalance_events.size(), 4u);
  EXPECT_EQ(d.disbalance_real.size(), 3u);
  EXPECT_EQ(d.disbalance_real.t, (std::vector<double>{34200.0, 34200.5, 34202.0}));
  EXPECT_DOUBLE_EQ(d.disbalance_real.x[0], 0.0);
  EXPECT_DOUBLE_EQ(d.disbalance_real.x[1], (15.0 - 35.0) / 50.0);
  EXPECT_EQ(d.midprice_events.size(), 4u);
}

TEST(LoadDay, RowCountMismatch) {
  TempDir dir;
  write_text(dir / "m.csv", "34200.0,1,1,10,1000,1\n34200.5,1,2,10,1001,-1\n");
  write_text(dir / "o.csv", "1001,10,999,10\n");
  EXPECT_THROW(load_day(dir / "m.csv", dir / "o.csv", 1), Error);
}

TEST(AttachTimes, DropsHaltRows) {
  std::vector<DepthRow> depth{book({1}, {1}), book({1}, {1}), book({2}, {1})};
  std::vector<MessageEvent> msgs(3);
  msgs[0].time = 1.0;
  msgs[1].time = 2.0;
  msgs[1].kind = EventKind::trading_halt;
  msgs[2].time = 3.0;
  attach_message_times(depth, msgs);
  ASSERT_EQ(depth.size(), 2u);
  EXPECT_EQ(depth[1].time, 3.0);
  EXPECT_EQ(depth[1].levels[0].bid_volume, 2);
  std::vector<DepthRow> fresh{book({1}, {1}), book({1}, {1}), book({2}, {1})};
  msgs.pop_back();
  EXPECT_THROW(attach_message_times(fresh, msgs), Error);
}
