#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "lrm/cache.hpp"
#include "lrm/pipeline.hpp"
#include "test_util.hpp"

#include <sys/wait.h>

using namespace lrm;
using lrm::testing::TempDir;
using lrm::testing::write_text;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::filesystem::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Writes one synthetic LOBSTER day (2 levels) with random-walk volumes.
// Returns the number of snapshots that survive trimming at 0.05.
std::size_t write_lobster_day(const std::filesystem::path& dir, const std::string& symbol,
                              const std::string& date, std::uint64_t seed,
                              std::size_t rows = 3000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.0, 2.0 * 23400.0 / rows);
  std::uniform_int_distribution<int> step(-20, 20);
  const std::string stem = symbol + "_" + date + "_34200000_57600000_";
  std::ostringstream msg, ob;
  msg.precision(10);
  double t = 34200.0;
  int v[4] = {500, 500, 500, 500};
  std::size_t first = rows, last = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    t += gap(rng) + 1e-4;
    for (int& x : v) x = std::max(1, x + step(rng));
    const double bid = v[1] + v[3], ask = v[0] + v[2];
    if (std::fabs((bid - ask) / (bid + ask)) <= 0.05) {
      first = std::min(first, i);
      last = i;
    }
    msg << t << ",1," << i + 1 << ",10,10000," << (i % 2 == 0 ? 1 : -1) << '\n';
    ob << "10100," << v[0] << ",10000," << v[1] << ",10200," << v[2] << ",9900," << v[3] << '\n';
  }
  write_text(dir / (stem + "message_2.csv"), msg.str());
  write_text(dir / (stem + "orderbook_2.csv"), ob.str());
  return first < rows ? last - first + 1 : 0;
}

RunConfig small_fbm(const std::filesystem::path& out) {
  RunConfig c;
  c.out_dir = out;
  c.synth.kind = "fbm";
  c.synth.hurst = 0.7;
  c.synth.length = 1 << 16;
  c.synth.realizations = 2;
  c.tau_event_ticks = {1.0, 4.0};
  c.seed = 5;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LRM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, Defaults) {
  RunConfig c;
  EXPECT_EQ(c.levels, 10u);
  EXPECT_EQ(c.tau_real_seconds, (std::vector<double>{200.0}));
  EXPECT_EQ(c.tau_event_ticks, (std::vector<double>{500.0, 2000.0}));
  EXPECT_EQ(c.bins_per_decade, 10);
  EXPECT_EQ(c.estimators.size(), 4u);
}

TEST(Config, Settings) {
  RunConfig c;
  apply_setting(c, "symbols", "AAPL, MSFT");
  apply_setting(c, "tau-event-ticks", "100,400");
  apply_setting(c, "estimators", "bda,rs,bda");
  apply_setting(c, "synth_increments", "true");
  apply_setting(c, "sde_x_max", "50");
  EXPECT_EQ(c.symbols, (std::vector<std::string>{"AAPL", "MSFT"}));
  EXPECT_EQ(c.tau_event_ticks, (std::vector<double>{100.0, 400.0}));
  EXPECT_EQ(c.estimators, (std::vector<Estimator>{Estimator::bda, Estimator::rs}));
  EXPECT_FALSE(c.enabled(Estimator::psd));
  EXPECT_TRUE(c.synth.increments);
  EXPECT_EQ(c.synth.sde.x_max, 50.0);
  EXPECT_THROW(apply_setting(c, "no_such_key", "1"), ConfigError);
  EXPECT_THROW(apply_setting(c, "levels", "ten"), ConfigError);
  EXPECT_THROW(apply_setting(c, "estimators", "wavelet"), ConfigError);
}

TEST(Config, File) {
  TempDir dir;
  write_text(dir / "run.conf", "# comment\nlevels = 5\n\nthresholds = -0.1, 0, 0.1  # inline\n");
  RunConfig c;
  load_config_file(c, dir / "run.conf");
  EXPECT_EQ(c.levels, 5u);
  EXPECT_EQ(c.thresholds, (std::vector<double>{-0.1, 0.0, 0.1}));
  write_text(dir / "bad.conf", "levels 5\n");
  EXPECT_THROW(load_config_file(c, dir / "bad.conf"), ConfigError);
  EXPECT_THROW(load_config_file(c, dir / "missing.conf"), ConfigError);
}

TEST(Config, Validation) {
  TempDir dir;
  RunConfig c;
  c.out_dir = dir / "out";
  EXPECT_NO_THROW(c.validate());
  EXPECT_TRUE(std::filesystem::is_directory(c.out_dir));
  auto bad = c;
  bad.estimators.clear();
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.tau_event_ticks = {0.0};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.bins_per_decade = 1;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Pipeline, SynthAnalyzeReport) {
  TempDir dir;
  const RunConfig c = small_fbm(dir.path());
  EXPECT_EQ(cmd_synth(c).exit_code, 0);
  const std::string name = "FBM_H0.7";
  const Series cached = read_series_cache(dir / ("cache/" + name + "_event.lrm"));
  EXPECT_EQ(cached.size(), 2u << 16);

  const RunResult r = cmd_analyze(c);
  for (const auto& e : r.errors) ADD_FAILURE() << e;
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.reports.size(), 4u);
  for (const char* f : {"table1.csv", "table2.csv", "table3.csv", "bda_fits.csv",
                        "hurst_report.json"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_EQ(line_count(dir / "table1.csv"), 2u);
  EXPECT_EQ(line_count(dir / "table2.csv"), 3u);  // one row per tau
  EXPECT_EQ(line_count(dir / "table3.csv"), 2u);
  EXPECT_TRUE(std::filesystem::exists(dir / ("curves/psd_" + name + "_event.csv")));

  const RunResult rep = cmd_report(c);
  EXPECT_EQ(rep.exit_code, 0);
  EXPECT_EQ(rep.reports.size(), 4u);
  const std::string csv = slurp(dir / "hurst_comparison.csv");
  EXPECT_EQ(csv.rfind("method,domain,period,symbol,H,stderr\n", 0), 0u);
  // the cached series is the motion; only BDA reads H off it directly
  for (const auto& rr : rep.reports) {
    EXPECT_TRUE(std::isfinite(rr.H)) << to_string(rr.method);
    if (rr.method == Estimator::bda) EXPECT_NEAR(rr.H, 0.7, 0.15);
  }
}

TEST(Pipeline, EstimatorSubset) {
  TempDir dir;
  RunConfig c = small_fbm(dir.path());
  c.estimators = {Estimator::rs};
  cmd_synth(c);
  const RunResult r = cmd_analyze(c);
  EXPECT_EQ(r.exit_code, 0);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.reports[0].method, Estimator::rs);
  EXPECT_EQ(line_count(dir / "table1.csv"), 1u);
}

TEST(Pipeline, ByteReproducible) {
  TempDir a, b;
  RunConfig ca = small_fbm(a.path());
  RunConfig cb = small_fbm(b.path());
  cb.threads = 3;
  for (auto* c : {&ca, &cb}) {
    cmd_synth(*c);
    cmd_analyze(*c);
    cmd_report(*c);
  }
  for (const char* f : {"table1.csv", "table2.csv", "table3.csv", "bda_fits.csv",
                        "hurst_comparison.csv", "cache/FBM_H0.7_event.lrm"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Pipeline, PartialFailureExitCode) {
  TempDir dir;
  RunConfig c = small_fbm(dir.path());
  c.estimators = {Estimator::rs, Estimator::bda};
  c.thresholds = {1e9};
  cmd_synth(c);
  const RunResult r = cmd_analyze(c);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.errors.empty());
  EXPECT_EQ(r.reports.size(), 1u);
}

TEST(Pipeline, MissingInputs) {
  TempDir dir;
  RunConfig c;
  c.out_dir = dir / "out";
  EXPECT_THROW(cmd_analyze(c), Error);
  EXPECT_THROW(cmd_report(c), Error);
  EXPECT_THROW(cmd_ingest(c), ConfigError);
  c.data_dir = dir / "nowhere";
  EXPECT_THROW(cmd_ingest(c), ConfigError);
  c.data_dir = dir / "empty";
  std::filesystem::create_directories(c.data_dir);
  EXPECT_THROW(cmd_ingest(c), Error);
  c.synth.kind = "levy";
  EXPECT_THROW(cmd_synth(c), ConfigError);
  c.synth.kind = "fbm";
  c.synth.length = 1000;
  EXPECT_THROW(cmd_synth(c), ConfigError);
}

TEST(Pipeline, IngestLobsterDirectory) {
  TempDir dir;
  const auto data = dir / "data";
  const std::size_t kept = write_lobster_day(data / "2012", "TEST", "2012-06-21", 1) +
                           write_lobster_day(data / "2012", "TEST", "2012-06-22", 2);
  write_lobster_day(data, "OTHER", "2012-06-21", 3);
  // orderbook partner missing
  write_text(data / "TEST_2012-06-25_34200000_57600000_message_2.csv", "34200.0,1,1,10,100,1\n");
  RunConfig c;
  c.data_dir = data;
  c.out_dir = dir / "out";
  c.levels = 2;
  c.symbols = {"TEST"};
  const RunResult r = cmd_ingest(c);
  EXPECT_EQ(r.exit_code, 0);
  const std::string manifest = slurp(c.out_dir / "manifest.json");
  EXPECT_NE(manifest.find("\"TEST\""), std::string::npos);
  EXPECT_EQ(manifest.find("\"OTHER\""), std::string::npos);
  EXPECT_NE(manifest.find("orderbook file missing"), std::string::npos);
  EXPECT_NE(manifest.find("flow_intensity_per_hour"), std::string::npos);

  const Series real = read_series_cache(c.out_dir / "cache/TEST_real.lrm");
  const Series events = read_series_cache(c.out_dir / "cache/TEST_event.lrm");
  EXPECT_EQ(real.domain, TimeDomain::real_time_seconds);
  EXPECT_EQ(events.domain, TimeDomain::event_ticks);
  for (std::size_t i = 1; i < real.size(); ++i) ASSERT_GT(real.t[i], real.t[i - 1]);
  for (double x : real.x) {
    ASSERT_GE(x, -1.0);
    ASSERT_LE(x, 1.0);
  }
  EXPECT_EQ(events.size(), kept);
  EXPECT_EQ(real.size(), kept);

  c.symbols = {"TEST", "ABSENT"};
  EXPECT_EQ(cmd_ingest(c).exit_code, 2);
  c.levels = 10;
  c.symbols.clear();
  EXPECT_THROW(cmd_ingest(c), Error);
}

TEST(Pipeline, IngestedSeriesAnalyze) {
  TempDir dir;
  const auto data = dir / "data";
  for (int d = 0; d < 3; ++d)
    write_lobster_day(data, "TEST", "2012-06-2" + std::to_string(d + 1), 10 + d, 20000);
  RunConfig c;
  c.data_dir = data;
  c.out_dir = dir / "out";
  c.levels = 2;
  c.tau_real_seconds = {2.0};
  c.tau_event_ticks = {2.0};
  c.estimators = {Estimator::psd, Estimator::rs, Estimator::dfa};
  ASSERT_EQ(cmd_ingest(c).exit_code, 0);
  const RunResult r = cmd_analyze(c);
  for (const auto& e : r.errors) ADD_FAILURE() << e;
  EXPECT_EQ(r.reports.size(), 6u);
  EXPECT_NE(slurp(c.out_dir / "table1.csv").find("TEST,2012,real,"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const std::string out = " --out " + (dir / "out").string();
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("synth --bogus-flag"), 1);
  EXPECT_EQ(run_cli("analyze" + out), 1);
  EXPECT_EQ(run_cli("synth --kind levy" + out), 1);
  EXPECT_EQ(run_cli("ingest --data-dir " + (dir / "none").string() + out), 1);
  EXPECT_EQ(run_cli("synth --kind fbm --hurst 0.7 --length 65536 --realizations 2" + out), 0);
  EXPECT_EQ(run_cli("analyze --estimators rs,bda --tau-event-ticks 1 --thresholds 1e9" + out), 2);
  EXPECT_EQ(run_cli("analyze --estimators rs,bda --tau-event-ticks 1" + out), 0);
  EXPECT_EQ(run_cli("report" + out), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out/hurst_comparison.csv"));
}

TEST(Cli, ConfigFileAndFlags) {
  TempDir dir;
  write_text(dir / "run.conf", "synth_kind = brownian\nsynth_length = 4096\nseed = 3\n");
  const std::string base = "synth --config " + (dir / "run.conf").string() + " --out ";
  EXPECT_EQ(run_cli(base + (dir / "a").string()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "a/cache/BROWNIAN_event.lrm"));
  EXPECT_EQ(run_cli(base + (dir / "b").string() + " --kind fbm --hurst 0.6"), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "b/cache/FBM_H0.6_event.lrm"));
  write_text(dir / "bad.conf", "unknown_key = 1\n");
  EXPECT_EQ(run_cli("synth --config " + (dir / "bad.conf").string()), 1);
}
