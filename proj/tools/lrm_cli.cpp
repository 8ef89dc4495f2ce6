#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lrm/pipeline.hpp"

namespace {

using Command = std::function<lrm::RunResult(const lrm::RunConfig&)>;

struct Flags {
  std::optional<std::string> config;
  std::map<std::string, std::string> settings;
};

void add_setting(CLI::App& app, Flags& flags, const std::string& flag, const std::string& key,
                 const std::string& help) {
  app.add_option_function<std::string>(
      flag, [&flags, key](const std::string& v) { flags.settings[key] = v; }, help);
}

void add_common(CLI::App& app, Flags& flags) {
  app.add_option_function<std::string>(
      "--config", [&flags](const std::string& v) { flags.config = v; },
      "key = value settings file; flags override it");
  add_setting(app, flags, "--data-dir", "data_dir", "LOBSTER input directory (env LRM_DATA_DIR)");
  add_setting(app, flags, "--out", "out", "output directory");
  add_setting(app, flags, "--symbols", "symbols", "comma-separated symbols");
  add_setting(app, flags, "--levels", "levels", "order book depth K");
  add_setting(app, flags, "--date-from", "date_from", "first date, YYYY-MM-DD");
  add_setting(app, flags, "--date-to", "date_to", "last date, YYYY-MM-DD");
  add_setting(app, flags, "--tau-real-seconds", "tau_real_seconds", "real-time steps");
  add_setting(app, flags, "--tau-event-ticks", "tau_event_ticks", "event-time steps");
  add_setting(app, flags, "--thresholds", "thresholds", "BDA thresholds");
  add_setting(app, flags, "--bins-per-decade", "bins_per_decade", "BDA histogram resolution");
  add_setting(app, flags, "--estimators", "estimators", "subset of psd,rs,dfa,bda");
  add_setting(app, flags, "--seed", "seed", "generator seed");
  add_setting(app, flags, "--threads", "threads", "worker threads");
}

void add_synth(CLI::App& app, Flags& flags) {
  add_setting(app, flags, "--kind", "synth_kind", "fbm, brownian or sde");
  add_setting(app, flags, "--name", "synth_name", "symbol to cache the series under");
  add_setting(app, flags, "--hurst", "synth_hurst", "fBm Hurst exponent");
  add_setting(app, flags, "--length", "synth_length", "points per realization");
  add_setting(app, flags, "--realizations", "synth_realizations", "independent realizations");
  add_setting(app, flags, "--increments", "synth_increments", "emit fGn instead of fBm");
  add_setting(app, flags, "--sde-x-max", "sde_x_max", "upper reflecting wall");
  add_setting(app, flags, "--sde-dt-scale", "sde_dt_scale", "Euler step scale kappa^2");
  add_setting(app, flags, "--sde-obs-step", "sde_obs_step", "observation grid spacing");
}

lrm::RunConfig build_config(const Flags& flags) {
  lrm::RunConfig config;
  if (const char* env = std::getenv("LRM_DATA_DIR"); env != nullptr && *env != '\0')
    config.data_dir = env;
  if (flags.config) lrm::load_config_file(config, *flags.config);
  for (const auto& [key, value] : flags.settings) lrm::apply_setting(config, key, value);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range memory analysis of order-book dis-balance series"};
  app.require_subcommand(1);

  Flags flags;
  Command command;
  const std::map<std::string, Command> commands{{"ingest", lrm::cmd_ingest},
                                                {"synth", lrm::cmd_synth},
                                                {"analyze", lrm::cmd_analyze},
                                                {"report", lrm::cmd_report}};
  const std::map<std::string, std::string> help{
      {"ingest", "parse LOBSTER files into cached dis-balance series"},
      {"synth", "generate a synthetic reference series"},
      {"analyze", "run the Hurst estimators on cached series"},
      {"report", "collect estimates into hurst_comparison.csv"}};
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_common(*sub, flags);
    if (name == "synth") add_synth(*sub, flags);
    sub->callback([&command, fn = fn] { command = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const lrm::RunResult result = command(build_config(flags));
    for (const auto& e : result.errors) fmt::print(stderr, "partial: {}\n", e);
    return result.exit_code;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
