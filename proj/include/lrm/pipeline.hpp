#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/series.hpp"
#include "lrm/synth.hpp"

namespace lrm {

/// Invalid or inconsistent run configuration (exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Estimator : std::uint8_t { psd, rs, dfa, bda };
std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

struct SynthConfig {
  std::string kind = "fbm";  // fbm, brownian or sde
  std::string name;          // symbol under which the series is cached
  double hurst = 0.7;
  std::size_t length = std::size_t{1} << 21;
  std::size_t realizations = 1;
  bool increments = false;  // fbm only: emit fGn instead of the motion
  SdeSpec sde;
};

struct RunConfig {
  std::filesystem::path data_dir;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> symbols;  // empty: everything found
  std::string date_from;             // inclusive YYYY-MM-DD bounds, empty = open
  std::string date_to;
  std::size_t levels = 10;
  std::vector<double> tau_real_seconds{200.0};
  std::vector<double> tau_event_ticks{500.0, 2000.0};
  std::vector<double> thresholds;  // empty: per-series quantile defaults
  int bins_per_decade = 10;
  std::vector<Estimator> estimators{Estimator::psd, Estimator::rs, Estimator::dfa,
                                    Estimator::bda};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  SynthConfig synth;

  [[nodiscard]] bool enabled(Estimator e) const;
  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// Applies one `key = value` setting. Keys use underscores and match the
/// long flag names (tau_real_seconds, bins_per_decade, synth_hurst, ...).
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat text file of `key = value` lines; `#` starts a comment.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

struct HurstReport {
  std::string symbol;
  std::string period;
  TimeDomain domain = TimeDomain::real_time_seconds;
  Estimator method = Estimator::psd;
  double H = 0.0;
  double stderr = 0.0;
  bool in_model_range = true;
  std::vector<std::pair<std::string, double>> aux;
};

struct RunResult {
  int exit_code = 0;  // 0 success, 2 partial
  std::vector<std::string> errors;
  std::vector<HurstReport> reports;
};

/// LOBSTER files -> stitched dis-balance caches + manifest.json.
RunResult cmd_ingest(const RunConfig& config);
/// Synthetic series -> cache + manifest entry.
RunResult cmd_synth(const RunConfig& config);
/// Cached series -> tables, curve CSVs and hurst_report.json.
RunResult cmd_analyze(const RunConfig& config);
/// hurst_report.json -> hurst_comparison.csv.
RunResult cmd_report(const RunConfig& config);

}  // namespace lrm
