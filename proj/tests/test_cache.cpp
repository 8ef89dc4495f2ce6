#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

#include "lrm/cache.hpp"
#include "lrm/error.hpp"
#include "lrm/io.hpp"
#include "test_util.hpp"

using namespace lrm;
using lrm::testing::TempDir;
using lrm::testing::write_text;

TEST(SeriesCache, RoundTripIsBitExact) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  Series s;
  s.domain = TimeDomain::event_ticks;
  for (int i = 0; i < 1000; ++i) s.push_back(i, n(rng));
  s.x[3] = std::numeric_limits<double>::denorm_min();
  s.x[4] = -0.0;
  TempDir dir;
  write_series_cache(dir / "a.lrm", s);
  const Series r = read_series_cache(dir / "a.lrm");
  EXPECT_EQ(r.domain, TimeDomain::event_ticks);
  ASSERT_EQ(r.size(), s.size());
  EXPECT_EQ(std::memcmp(r.x.data(), s.x.data(), s.x.size() * sizeof(double)), 0);
  EXPECT_EQ(r.t, s.t);
}

TEST(SeriesCache, HeaderLayout) {
  Series s;
  s.push_back(1.5, -0.25);
  TempDir dir;
  write_series_cache(dir / "h.lrm", s);
  std::ifstream in(dir / "h.lrm", std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(bytes.size(), 32u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "LRM1");
  EXPECT_EQ(bytes[4], 0);
  EXPECT_EQ(bytes[8], 1);
  double t = 0.0;
  std::memcpy(&t, bytes.data() + 16, 8);
  EXPECT_EQ(t, 1.5);
}

TEST(SeriesCache, EmptySeries) {
  TempDir dir;
  write_series_cache(dir / "e.lrm", Series{});
  EXPECT_TRUE(read_series_cache(dir / "e.lrm").empty());
}

TEST(SeriesCache, RejectsCorruptFiles) {
  TempDir dir;
  write_text(dir / "bad.lrm", "NOPE0000000000000000");
  EXPECT_THROW(read_series_cache(dir / "bad.lrm"), Error);
  EXPECT_THROW(read_series_cache(dir / "missing.lrm"), Error);

  Series s;
  for (int i = 0; i < 10; ++i) s.push_back(i, i);
  write_series_cache(dir / "t.lrm", s);
  std::filesystem::resize_file(dir / "t.lrm", 16 + 16 * 10 - 8);
  EXPECT_THROW(read_series_cache(dir / "t.lrm"), Error);
}

TEST(AtomicWrite, ReplacesAndLeavesNoTemp) {
  TempDir dir;
  write_file_atomic(dir / "sub" / "f.txt", "first");
  write_file_atomic(dir / "sub" / "f.txt", "second");
  std::ifstream in(dir / "sub" / "f.txt");
  std::string text;
  std::getline(in, text);
  EXPECT_EQ(text, "second");
  EXPECT_THROW(write_file_atomic(dir / "sub" / "g.txt",
                                 [](std::ostream&) { throw Error("boom"); }),
               Error);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "sub")) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1u);
}

TEST(Format, SeventeenDigitsRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  const std::vector<double> v{1.0, 0.5};
  EXPECT_EQ(join_doubles(v), "1,0.5");
}
