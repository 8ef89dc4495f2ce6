#include "lrm/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "lrm/bda.hpp"
#include "lrm/cache.hpp"
#include "lrm/io.hpp"
#include "lrm/lob.hpp"
#include "lrm/mfdfa.hpp"
#include "lrm/rescaled_range.hpp"
#include "lrm/spectral.hpp"

namespace lrm {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::string_view kManifest = "manifest.json";
constexpr std::string_view kReport = "hurst_report.json";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = std::min(s.find(',', start), s.size());
    const auto item = trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(fmt::format("invalid value '{}' for {}", text, key));
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(fmt::format("invalid boolean '{}' for {}", text, key));
}

std::vector<double> parse_doubles(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_value<double>(key, item));
  return out;
}

std::string domain_key(TimeDomain d) { return std::string(to_string(d)); }

std::string label(double v) { return fmt::format("{:g}", v); }

std::string safe_name(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return s;
}

std::string period_of(const std::string& first, const std::string& last) {
  if (first.size() < 4) return first.empty() ? "unknown" : first;
  const std::string a = first.substr(0, 4);
  const std::string b = last.size() >= 4 ? last.substr(0, 4) : a;
  return a == b ? a : a + "-" + b;
}

void log_line(const std::string& msg) { fmt::print(stderr, "{}\n", msg); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

json load_manifest(const fs::path& out_dir) {
  const fs::path p = out_dir / kManifest;
  if (!fs::exists(p)) return json{{"symbols", json::object()}};
  json m = read_json(p);
  if (!m.contains("symbols")) m["symbols"] = json::object();
  return m;
}

std::string cache_name(const std::string& symbol, TimeDomain d) {
  return "cache/" + safe_name(symbol) + "_" + domain_key(d) + ".lrm";
}

void store_series(const fs::path& out_dir, json& entry, const Series& s) {
  const std::string rel = cache_name(s.origin.symbol, s.domain);
  write_series_cache(out_dir / rel, s);
  json d;
  d["cache"] = rel;
  d["points"] = s.size();
  d["day_offsets"] = s.origin.day_offsets;
  entry["domains"][domain_key(s.domain)] = d;
}

// Copy of each segment with its mean removed.
std::vector<Series> demeaned_days(const Series& s) {
  std::vector<Series> days;
  for (auto& d : split_days(s)) {
    if (d.size() < 2 || !(d.span() > 0.0)) continue;
    const double m = mean(d.x);
    for (double& v : d.x) v -= m;
    days.push_back(std::move(d));
  }
  return days;
}

struct Table2Row {
  double tau = 0.0;
  double h_rs = std::numeric_limits<double>::quiet_NaN();
  double h_rs_err = std::numeric_limits<double>::quiet_NaN();
  double h2 = std::numeric_limits<double>::quiet_NaN();
  double h2_err = std::numeric_limits<double>::quiet_NaN();
};

struct SeriesContext {
  std::string symbol;
  std::string period;
  TimeDomain domain;
  fs::path curves;
  std::string tag;  // symbol_domain for file names
};

class Analyzer {
 public:
  Analyzer(const RunConfig& c, RunResult& r) : config_(c), result_(r) {}

  std::string table1, table2, table3, bda_fits;

  void run(const SeriesContext& ctx, const Series& s) {
    if (config_.enabled(Estimator::psd)) guarded(ctx, "PSD", [&] { psd(ctx, s); });
    if (config_.enabled(Estimator::rs) || config_.enabled(Estimator::dfa)) {
      const auto& taus =
          ctx.domain == TimeDomain::real_time_seconds ? config_.tau_real_seconds
                                                      : config_.tau_event_ticks;
      for (std::size_t k = 0; k < taus.size(); ++k) uniform(ctx, s, taus[k], k == 0);
    }
    if (config_.enabled(Estimator::bda)) guarded(ctx, "BDA", [&] { bda(ctx, s); });
  }

 private:
  const RunConfig& config_;
  RunResult& result_;

  template <class Fn>
  bool guarded(const SeriesContext& ctx, std::string_view what, Fn&& fn) {
    try {
      fn();
      return true;
    } catch (const std::exception& e) {
      const std::string msg =
          fmt::format("{} {} {}: {}", ctx.symbol, to_string(ctx.domain), what, e.what());
      log_line("error: " + msg);
      result_.errors.push_back(msg);
      return false;
    }
  }

  HurstReport base(const SeriesContext& ctx, Estimator m) const {
    HurstReport r;
    r.symbol = ctx.symbol;
    r.period = ctx.period;
    r.domain = ctx.domain;
    r.method = m;
    return r;
  }

  void psd(const SeriesContext& ctx, const Series& s) {
    const auto days = demeaned_days(s);
    if (days.empty()) throw Error("no day with at least two points");
    std::vector<double> spans;
    double points = 0.0, total_span = 0.0;
    for (const auto& d : days) {
      spans.push_back(d.span());
      points += static_cast<double>(d.size());
      total_span += d.span();
    }
    const double f_lo = 1.0 / median(spans);
    const double f_hi = 0.5 * points / total_span;
    if (!(f_hi > f_lo)) throw Error("frequency range is empty");
    const auto grid = log_frequency_grid(f_lo, f_hi, 200);
    PsdEstimate est = average_daily_psd(days, grid, config_.threads);

    write_file_atomic(ctx.curves / ("psd_" + ctx.tag + ".csv"), [&](std::ostream& out) {
      out << "frequency,power\n";
      for (std::size_t i = 0; i < est.frequencies.size(); ++i)
        out << format_double(est.frequencies[i]) << ',' << format_double(est.power[i]) << '\n';
    });

    const TwoRegimeFit fit = fit_two_regime_psd(est);
    const HurstEstimate h = hurst_from_psd(fit.beta_low, fit.stderr_low);
    table1 += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", ctx.symbol, ctx.period,
                          to_string(ctx.domain), format_double(fit.beta_low),
                          format_double(fit.stderr_low), format_double(fit.beta_high),
                          format_double(fit.stderr_high), format_double(fit.f_break),
                          format_double(h.H), format_double(h.stderr));
    HurstReport r = base(ctx, Estimator::psd);
    r.H = h.H;
    r.stderr = h.stderr;
    r.in_model_range = h.in_model_range;
    r.aux = {{"beta1", fit.beta_low},
             {"beta2", fit.beta_high},
             {"f_break", fit.f_break},
             {"days", static_cast<double>(est.n_days_averaged)}};
    result_.reports.push_back(std::move(r));
  }

  void uniform(const SeriesContext& ctx, const Series& s, double tau, bool primary) {
    Table2Row row;
    row.tau = tau;
    const std::string tag = ctx.tag + "_tau" + label(tau);
    UniformSeries u;
    std::vector<std::size_t> sizes;
    const bool ready = guarded(ctx, fmt::format("resample tau={}", label(tau)), [&] {
      u = resample_uniform(s, tau);
      sizes = default_window_sizes(u.size());
    });

    if (ready && config_.enabled(Estimator::rs)) {
      guarded(ctx, fmt::format("RS tau={}", label(tau)), [&] {
        const RsCurve c = rescaled_range(u, sizes);
        for (const auto& w : c.warnings) log_line(fmt::format("warning: {} RS: {}", tag, w));
        write_file_atomic(ctx.curves / ("rs_" + tag + ".csv"), [&](std::ostream& out) {
          out << "n,rs\n";
          for (std::size_t i = 0; i < c.n_values.size(); ++i)
            out << c.n_values[i] << ',' << format_double(c.rs_means[i]) << '\n';
        });
        row.h_rs = c.H;
        row.h_rs_err = c.slope_stderr;
        if (primary) {
          HurstReport r = base(ctx, Estimator::rs);
          r.H = c.H;
          r.stderr = c.slope_stderr;
          r.aux = {{"tau", tau}, {"r2", c.r2}};
          result_.reports.push_back(std::move(r));
        }
      });
    }

    if (ready && config_.enabled(Estimator::dfa)) {
      guarded(ctx, fmt::format("DFA tau={}", label(tau)), [&] {
        const auto q = default_q_values();
        const MfdfaSurface m = mfdfa(u, sizes, q);
        for (const auto& w : m.warnings) log_line(fmt::format("warning: {} DFA: {}", tag, w));
        write_file_atomic(ctx.curves / ("mfdfa_" + tag + ".csv"), [&](std::ostream& out) {
          out << "q,n,F\n";
          for (std::size_t qi = 0; qi < m.q_values.size(); ++qi)
            for (std::size_t ni = 0; ni < m.n_values.size(); ++ni)
              out << format_double(m.q_values[qi]) << ',' << m.n_values[ni] << ','
                  << format_double(m.at(qi, ni)) << '\n';
        });
        write_file_atomic(ctx.curves / ("hq_" + tag + ".csv"), [&](std::ostream& out) {
          out << "q,H,stderr\n";
          for (const auto& g : m.hurst)
            out << format_double(g.q) << ',' << (g.H ? format_double(*g.H) : "nan") << ','
                << format_double(g.stderr) << '\n';
        });
        const auto h2 = std::find_if(m.hurst.begin(), m.hurst.end(),
                                     [](const GeneralizedHurst& g) { return g.q == 2.0; });
        if (h2 == m.hurst.end() || !h2->H) throw Error("H(2) is undefined");
        row.h2 = *h2->H;
        row.h2_err = h2->stderr;
        if (primary) {
          HurstReport r = base(ctx, Estimator::dfa);
          r.H = *h2->H;
          r.stderr = h2->stderr;
          r.aux = {{"tau", tau}};
          for (const auto& g : m.hurst)
            if (g.H) r.aux.emplace_back("H_q" + label(g.q), *g.H);
          result_.reports.push_back(std::move(r));
        }
      });
    }

    table2 += fmt::format("{},{},{},{},{},{},{},{}\n", ctx.symbol, ctx.period,
                          to_string(ctx.domain), format_double(row.tau), format_double(row.h_rs),
                          format_double(row.h_rs_err), format_double(row.h2),
                          format_double(row.h2_err));
  }

  void bda(const SeriesContext& ctx, const Series& s) {
    const auto segments = split_days(s);
    const std::vector<double> thresholds =
        config_.thresholds.empty() ? default_thresholds(s.x) : config_.thresholds;
    BdaOptions opt;
    opt.bins_per_decade = config_.bins_per_decade;
    const BdaReport rep = bda_pipeline(segments, thresholds, opt, config_.threads);

    write_file_atomic(ctx.curves / ("bda_" + ctx.tag + ".csv"), [&](std::ostream& out) {
      out << "threshold,kind,bin_lo,bin_hi,center,count,density\n";
      for (const auto& t : rep.thresholds)
        for (auto kind : {DurationKind::burst, DurationKind::interburst, DurationKind::pooled}) {
          const auto& k = t.get(kind);
          if (!k.pdf) continue;
          for (std::size_t i = 0; i < k.pdf->bins(); ++i)
            out << format_double(t.threshold) << ',' << to_string(kind) << ','
                << format_double(k.pdf->bin_edges[i]) << ','
                << format_double(k.pdf->bin_edges[i + 1]) << ','
                << format_double(k.pdf->center(i)) << ',' << k.pdf->counts[i] << ','
                << format_double(k.pdf->densities[i]) << '\n';
        }
    });

    HurstReport r = base(ctx, Estimator::bda);
    const BdaKindResult* best = nullptr;
    const BdaThresholdResult* best_t = nullptr;
    for (const auto& t : rep.thresholds) {
      for (auto kind : {DurationKind::burst, DurationKind::interburst, DurationKind::pooled}) {
        const auto& k = t.get(kind);
        bda_fits += fmt::format(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", ctx.symbol, to_string(ctx.domain),
            format_double(t.threshold), to_string(kind), k.durations.durations.size(),
            k.fit ? format_double(k.fit->gamma) : "nan",
            k.fit ? format_double(k.fit->stderr) : "nan",
            k.fit ? format_double(k.fit->r2) : "nan",
            k.fit ? format_double(k.fit->T_lo) : "nan",
            k.fit ? format_double(k.fit->T_hi) : "nan",
            k.hurst ? format_double(k.hurst->H) : "nan",
            k.region && k.region->fallback ? 1 : 0, k.error);
        if (!k.error.empty())
          log_line(fmt::format("warning: {} BDA h={} {}: {}", ctx.tag, label(t.threshold),
                               to_string(kind), k.error));
        if (k.fit)
          r.aux.emplace_back(
              fmt::format("gamma_{}_h{}", to_string(kind), format_double(t.threshold)),
              k.fit->gamma);
      }
      if (t.pooled.ok() &&
          (!best || t.pooled.durations.durations.size() > best->durations.durations.size())) {
        best = &t.pooled;
        best_t = &t;
      }
    }
    if (!best) throw Error("no threshold produced a power-law fit");

    table3 += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", ctx.symbol, ctx.period,
                          to_string(ctx.domain), format_double(best->hurst->H),
                          format_double(best->hurst->stderr), format_double(best->fit->gamma),
                          format_double(best_t->threshold), format_double(best->fit->T_lo),
                          format_double(best->fit->T_hi), best->fit->bins_used,
                          best->durations.durations.size());
    r.H = best->hurst->H;
    r.stderr = best->hurst->stderr;
    r.in_model_range = best->hurst->in_model_range;
    r.aux.insert(r.aux.begin(), {{"gamma2", best->fit->gamma},
                                 {"threshold", best_t->threshold},
                                 {"min_duration", rep.min_duration}});
    result_.reports.push_back(std::move(r));
  }
};

json report_to_json(const HurstReport& r) {
  json j;
  j["symbol"] = r.symbol;
  j["period"] = r.period;
  j["domain"] = to_string(r.domain);
  j["method"] = to_string(r.method);
  j["H"] = r.H;
  j["stderr"] = r.stderr;
  j["in_model_range"] = r.in_model_range;
  json aux = json::object();
  for (const auto& [k, v] : r.aux) aux[k] = v;
  j["aux"] = aux;
  return j;
}

std::string method_label(Estimator e) {
  switch (e) {
    case Estimator::psd:
      return "PSD";
    case Estimator::rs:
      return "RS";
    case Estimator::dfa:
      return "DFA";
    case Estimator::bda:
      return "BDA";
  }
  return "?";
}

}  // namespace

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::psd:
      return "psd";
    case Estimator::rs:
      return "rs";
    case Estimator::dfa:
      return "dfa";
    case Estimator::bda:
      return "bda";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  std::string n(trim(name));
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (n == "psd") return Estimator::psd;
  if (n == "rs" || n == "r/s") return Estimator::rs;
  if (n == "dfa" || n == "mfdfa") return Estimator::dfa;
  if (n == "bda") return Estimator::bda;
  throw ConfigError(fmt::format("unknown estimator '{}'", name));
}

bool RunConfig::enabled(Estimator e) const {
  return std::find(estimators.begin(), estimators.end(), e) != estimators.end();
}

void RunConfig::validate() const {
  if (estimators.empty()) throw ConfigError("at least one estimator must be enabled");
  if (levels == 0) throw ConfigError("levels must be positive");
  for (double t : tau_real_seconds)
    if (!(t > 0.0)) throw ConfigError("tau values must be positive");
  for (double t : tau_event_ticks)
    if (!(t > 0.0)) throw ConfigError("tau values must be positive");
  if (bins_per_decade < 2) throw ConfigError("bins_per_decade must be at least 2");
  if (threads == 0) throw ConfigError("threads must be positive");
  if (out_dir.empty()) throw ConfigError("output directory not set");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw ConfigError("output directory is not writable: " + out_dir.string());
}

void apply_setting(RunConfig& c, std::string_view raw_key, std::string_view value) {
  std::string key(trim(raw_key));
  std::replace(key.begin(), key.end(), '-', '_');
  value = trim(value);
  if (key == "data_dir") {
    c.data_dir = std::string(value);
  } else if (key == "out" || key == "out_dir") {
    c.out_dir = std::string(value);
  } else if (key == "symbols") {
    c.symbols.clear();
    for (auto s : split_list(value)) c.symbols.emplace_back(s);
  } else if (key == "date_from") {
    c.date_from = std::string(value);
  } else if (key == "date_to") {
    c.date_to = std::string(value);
  } else if (key == "levels") {
    c.levels = parse_value<std::size_t>(key, value);
  } else if (key == "tau_real_seconds") {
    c.tau_real_seconds = parse_doubles(key, value);
  } else if (key == "tau_event_ticks") {
    c.tau_event_ticks = parse_doubles(key, value);
  } else if (key == "thresholds") {
    c.thresholds = parse_doubles(key, value);
  } else if (key == "bins_per_decade") {
    c.bins_per_decade = parse_value<int>(key, value);
  } else if (key == "estimators") {
    c.estimators.clear();
    for (auto s : split_list(value)) {
      const Estimator e = parse_estimator(s);
      if (!c.enabled(e)) c.estimators.push_back(e);
    }
  } else if (key == "seed") {
    c.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "threads") {
    c.threads = parse_value<unsigned>(key, value);
  } else if (key == "synth_kind") {
    c.synth.kind = std::string(value);
  } else if (key == "synth_name") {
    c.synth.name = std::string(value);
  } else if (key == "synth_hurst") {
    c.synth.hurst = parse_value<double>(key, value);
  } else if (key == "synth_length") {
    c.synth.length = parse_value<std::size_t>(key, value);
  } else if (key == "synth_realizations") {
    c.synth.realizations = parse_value<std::size_t>(key, value);
  } else if (key == "synth_increments") {
    c.synth.increments = parse_bool(key, value);
  } else if (key == "sde_eta") {
    c.synth.sde.eta = parse_value<double>(key, value);
  } else if (key == "sde_lambda") {
    c.synth.sde.lambda = parse_value<double>(key, value);
  } else if (key == "sde_x_min") {
    c.synth.sde.x_min = parse_value<double>(key, value);
  } else if (key == "sde_x_max") {
    c.synth.sde.x_max = parse_value<double>(key, value);
  } else if (key == "sde_dt_scale") {
    c.synth.sde.dt_scale = parse_value<double>(key, value);
  } else if (key == "sde_obs_step") {
    c.synth.sde.obs_step = parse_value<double>(key, value);
  } else {
    throw ConfigError(fmt::format("unknown setting '{}'", key));
  }
}

void load_config_file(RunConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("{}:{}: expected key = value", path.string(), n));
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
}

RunResult cmd_ingest(const RunConfig& config) {
  config.validate();
  if (config.data_dir.empty()) throw ConfigError("data directory not set");
  if (!fs::is_directory(config.data_dir))
    throw ConfigError("data directory does not exist: " + config.data_dir.string());

  struct DayFiles {
    fs::path message, orderbook;
  };
  std::map<std::string, std::map<std::string, DayFiles>> found;
  for (const auto& entry : fs::recursive_directory_iterator(config.data_dir)) {
    if (!entry.is_regular_file()) continue;
    LobsterFileName name;
    if (!parse_lobster_file_name(entry.path().filename().string(), name)) continue;
    if (name.levels != config.levels) continue;
    if (!config.symbols.empty() &&
        std::find(config.symbols.begin(), config.symbols.end(), name.symbol) ==
            config.symbols.end())
      continue;
    if (!config.date_from.empty() && name.date < config.date_from) continue;
    if (!config.date_to.empty() && name.date > config.date_to) continue;
    auto& d = found[name.symbol][name.date];
    (name.kind == "message" ? d.message : d.orderbook) = entry.path();
  }

  RunResult result;
  json manifest = load_manifest(config.out_dir);
  std::size_t total_days = 0;
  for (const auto& want : config.symbols)
    if (!found.count(want)) {
      const std::string msg = "no files found for symbol " + want;
      log_line("warning: " + msg);
      result.errors.push_back(msg);
    }

  for (const auto& [symbol, days] : found) {
    json entry;
    entry["source"] = "lobster";
    entry["levels"] = config.levels;
    entry["skipped"] = json::array();
    std::vector<Series> real_days, event_days;
    std::vector<std::string> dates;
    std::vector<double> intensities;
    for (const auto& [date, files] : days) {
      auto skip = [&](const std::string& why) {
        log_line(fmt::format("warning: {} {} skipped: {}", symbol, date, why));
        entry["skipped"].push_back({{"date", date}, {"reason", why}});
      };
      if (files.message.empty() || files.orderbook.empty()) {
        skip(files.message.empty() ? "message file missing" : "orderbook file missing");
        continue;
      }
      try {
        DaySeries day = load_day(files.message, files.orderbook, config.levels);
        for (const auto& w : day.warnings)
          log_line(fmt::format("warning: {} {}: {}", symbol, date, w));
        Series real = trim_day(day.disbalance_real);
        Series events = trim_day(day.disbalance_events);
        if (real.size() < 2 || events.size() < 2) {
          skip("fewer than two points after trimming");
          continue;
        }
        if (day.disbalance_events.span() > 0.0)
          intensities.push_back(flow_intensity(day.disbalance_events));
        for (Series* s : {&real, &events}) {
          s->origin.symbol = symbol;
          s->origin.first_date = s->origin.last_date = date;
          s->origin.recipe = "lobster-disbalance";
        }
        real_days.push_back(std::move(real));
        event_days.push_back(to_event_time(events));
        dates.push_back(date);
      } catch (const std::exception& e) {
        skip(e.what());
      }
    }
    if (dates.empty()) {
      log_line(fmt::format("warning: {}: no usable days", symbol));
      result.errors.push_back(symbol + ": no usable days");
      continue;
    }
    total_days += dates.size();
    entry["days"] = dates.size();
    entry["dates"] = dates;
    entry["first_date"] = dates.front();
    entry["last_date"] = dates.back();
    entry["period"] = period_of(dates.front(), dates.back());
    entry["flow_intensity_per_hour"] = intensities.empty() ? 0.0 : mean(intensities);
    entry["flow_intensity_by_day"] = intensities;
    store_series(config.out_dir, entry, stitch_days(real_days));
    store_series(config.out_dir, entry, stitch_days(event_days));
    manifest["symbols"][symbol] = entry;
    log_line(fmt::format("{}: {} days ingested", symbol, dates.size()));
  }
  if (total_days == 0) throw Error("no trading days found in " + config.data_dir.string());
  write_json(config.out_dir / kManifest, manifest);
  result.exit_code = result.errors.empty() ? 0 : 2;
  return result;
}

RunResult cmd_synth(const RunConfig& config) {
  config.validate();
  const SynthConfig& sc = config.synth;
  if (sc.realizations == 0) throw ConfigError("synth_realizations must be positive");
  std::string name = sc.name;
  std::vector<Series> parts;
  if (sc.kind == "fbm" || sc.kind == "brownian") {
    const double h = sc.kind == "fbm" ? sc.hurst : 0.5;
    if (name.empty()) name = sc.kind == "fbm" ? fmt::format("FBM_H{:g}", h) : "BROWNIAN";
    std::unique_ptr<FbmGenerator> gen;
    try {
      gen = std::make_unique<FbmGenerator>(h, sc.length);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    const auto out = sc.increments && sc.kind == "fbm" ? FbmOutput::increments
                                                       : FbmOutput::motion;
    for (std::size_t r = 0; r < sc.realizations; ++r)
      parts.push_back(to_series(gen->generate(config.seed + r, out)));
  } else if (sc.kind == "sde") {
    if (name.empty()) name = "SDE";
    for (std::size_t r = 0; r < sc.realizations; ++r) {
      SdeSpec spec = sc.sde;
      spec.length = sc.length;
      spec.seed = config.seed + r;
      try {
        parts.push_back(gen_nonlinear_sde(spec));
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
  } else {
    throw ConfigError("unknown synth kind '" + sc.kind + "' (fbm, brownian, sde)");
  }
  for (auto& p : parts) {
    p.origin.symbol = name;
    p.origin.recipe = sc.kind;
  }
  Series s = stitch_days(parts);

  json manifest = load_manifest(config.out_dir);
  json entry;
  entry["source"] = "synthetic";
  entry["kind"] = sc.kind;
  entry["seed"] = config.seed;
  entry["length"] = sc.length;
  entry["realizations"] = sc.realizations;
  entry["days"] = sc.realizations;
  entry["period"] = "synthetic";
  if (sc.kind == "fbm") entry["hurst"] = sc.hurst;
  store_series(config.out_dir, entry, s);
  manifest["symbols"][name] = entry;
  write_json(config.out_dir / kManifest, manifest);
  log_line(fmt::format("{}: {} points in {} realization(s)", name, s.size(), sc.realizations));
  return {};
}

RunResult cmd_analyze(const RunConfig& config) {
  config.validate();
  const fs::path mpath = config.out_dir / kManifest;
  if (!fs::exists(mpath)) throw Error("no cached series in " + config.out_dir.string() +
                                      "; run ingest or synth first");
  const json manifest = read_json(mpath);
  const json& symbols = manifest.at("symbols");

  RunResult result;
  Analyzer an(config, result);
  const fs::path curves = config.out_dir / "curves";
  std::size_t analyzed = 0;
  for (const auto& [symbol, entry] : symbols.items()) {
    if (!config.symbols.empty() &&
        std::find(config.symbols.begin(), config.symbols.end(), symbol) == config.symbols.end())
      continue;
    for (TimeDomain d : {TimeDomain::real_time_seconds, TimeDomain::event_ticks}) {
      const std::string dk = domain_key(d);
      if (!entry.contains("domains") || !entry["domains"].contains(dk)) continue;
      const json& de = entry["domains"][dk];
      SeriesContext ctx{symbol, entry.value("period", std::string("unknown")), d, curves,
                        safe_name(symbol) + "_" + dk};
      Series s;
      try {
        s = read_series_cache(config.out_dir / de.at("cache").get<std::string>());
      } catch (const std::exception& e) {
        result.errors.push_back(fmt::format("{} {}: {}", symbol, dk, e.what()));
        log_line("error: " + result.errors.back());
        continue;
      }
      s.origin.symbol = symbol;
      s.origin.day_offsets = de.value("day_offsets", std::vector<std::size_t>{});
      log_line(fmt::format("analyzing {} {} ({} points)", symbol, dk, s.size()));
      an.run(ctx, s);
      ++analyzed;
    }
  }
  if (analyzed == 0) throw Error("no cached series matched the requested symbols");

  write_file_atomic(config.out_dir / "table1.csv",
                    "symbol,period,domain,beta1,beta1_stderr,beta2,beta2_stderr,f_break,H_psd,"
                    "H_psd_stderr\n" +
                        an.table1);
  write_file_atomic(config.out_dir / "table2.csv",
                    "symbol,period,domain,tau,H_rs,H_rs_stderr,H2_dfa,H2_dfa_stderr\n" +
                        an.table2);
  write_file_atomic(config.out_dir / "table3.csv",
                    "symbol,period,domain,H_bda,H_bda_stderr,gamma2,threshold,T_lo,T_hi,bins,"
                    "durations\n" +
                        an.table3);
  write_file_atomic(config.out_dir / "bda_fits.csv",
                    "symbol,domain,threshold,kind,durations,gamma,gamma_stderr,r2,T_lo,T_hi,H,"
                    "fallback,error\n" +
                        an.bda_fits);

  json rep;
  rep["reports"] = json::array();
  for (const auto& r : result.reports) rep["reports"].push_back(report_to_json(r));
  rep["errors"] = result.errors;
  write_json(config.out_dir / kReport, rep);
  result.exit_code = result.errors.empty() ? 0 : 2;
  return result;
}

RunResult cmd_report(const RunConfig& config) {
  const fs::path path = config.out_dir / kReport;
  if (!fs::exists(path)) throw Error("no analyze output in " + config.out_dir.string());
  const json rep = read_json(path);
  RunResult result;
  std::ostringstream out;
  out << "method,domain,period,symbol,H,stderr\n";
  for (const auto& j : rep.at("reports")) {
    HurstReport r;
    r.method = parse_estimator(j.at("method").get<std::string>());
    r.domain = parse_time_domain(j.at("domain").get<std::string>());
    r.period = j.at("period").get<std::string>();
    r.symbol = j.at("symbol").get<std::string>();
    if (!j.at("H").is_number()) continue;
    r.H = j.at("H").get<double>();
    r.stderr = j.at("stderr").is_number() ? j.at("stderr").get<double>() : 0.0;
    if (!config.symbols.empty() &&
        std::find(config.symbols.begin(), config.symbols.end(), r.symbol) == config.symbols.end())
      continue;
    out << method_label(r.method) << ',' << to_string(r.domain) << ',' << r.period << ','
        << r.symbol << ',' << format_double(r.H) << ',' << format_double(r.stderr) << '\n';
    result.reports.push_back(std::move(r));
  }
  write_file_atomic(config.out_dir / "hurst_comparison.csv", out.str());
  return result;
}

}  // namespace lrm
