#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lrm/bda.hpp"
#include "lrm/error.hpp"
#include "lrm/lob.hpp"
#include "lrm/mfdfa.hpp"
#include "lrm/pipeline.hpp"
#include "lrm/rescaled_range.hpp"
#include "lrm/series.hpp"
#include "lrm/spectral.hpp"
#include "lrm/synth.hpp"

namespace py = pybind11;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(v.size(), v.data()); }

lrm::UniformSeries uniform(const Array& values, double step) {
  lrm::UniformSeries u;
  u.step = step;
  u.values = to_vector(values);
  return u;
}

py::dict fit_dict(const lrm::PowerLawFit& f) {
  py::dict d;
  d["gamma"] = f.gamma;
  d["T_lo"] = f.T_lo;
  d["T_hi"] = f.T_hi;
  d["stderr"] = f.stderr;
  d["r2"] = f.r2;
  d["bins_used"] = f.bins_used;
  return d;
}

py::dict kind_dict(const lrm::BdaKindResult& k) {
  py::dict d;
  d["durations"] = k.durations.durations.size();
  d["excluded_below_floor"] = k.durations.excluded_below_floor;
  d["error"] = k.error;
  if (k.fit) d["fit"] = fit_dict(*k.fit);
  if (k.hurst) d["H"] = k.hurst->H;
  if (k.region) d["fallback"] = k.region->fallback;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Long-range memory estimators for order-book dis-balance series";

  py::register_exception<lrm::Error>(m, "Error", PyExc_RuntimeError);

  py::enum_<lrm::TimeDomain>(m, "TimeDomain")
      .value("real_time_seconds", lrm::TimeDomain::real_time_seconds)
      .value("event_ticks", lrm::TimeDomain::event_ticks);

  py::class_<lrm::Series>(m, "Series")
      .def(py::init([](const Array& t, const Array& x, lrm::TimeDomain domain) {
             lrm::Series s;
             s.t = to_vector(t);
             s.x = to_vector(x);
             if (s.t.size() != s.x.size()) throw py::value_error("t and x differ in length");
             s.domain = domain;
             return s;
           }),
           py::arg("t"), py::arg("x"), py::arg("domain") = lrm::TimeDomain::real_time_seconds)
      .def_property_readonly("t", [](const lrm::Series& s) { return to_array(s.t); })
      .def_property_readonly("x", [](const lrm::Series& s) { return to_array(s.x); })
      .def_readonly("domain", &lrm::Series::domain)
      .def_property_readonly("day_offsets",
                             [](const lrm::Series& s) { return s.origin.day_offsets; })
      .def("__len__", &lrm::Series::size);

  py::class_<lrm::UniformSeries>(m, "UniformSeries")
      .def(py::init([](const Array& values, double step, lrm::TimeDomain domain) {
             auto u = uniform(values, step);
             u.domain = domain;
             return u;
           }),
           py::arg("values"), py::arg("step") = 1.0,
           py::arg("domain") = lrm::TimeDomain::event_ticks)
      .def_property_readonly("values",
                             [](const lrm::UniformSeries& u) { return to_array(u.values); })
      .def_readonly("step", &lrm::UniformSeries::step)
      .def_readonly("domain", &lrm::UniformSeries::domain)
      .def("__len__", &lrm::UniformSeries::size);

  // order book ingestion
  m.def(
      "disbalance",
      [](const std::vector<double>& bid_volumes, const std::vector<double>& ask_volumes) {
        if (bid_volumes.size() != ask_volumes.size())
          throw py::value_error("bid and ask level counts differ");
        lrm::DepthRow row;
        for (std::size_t k = 0; k < bid_volumes.size(); ++k) {
          lrm::DepthLevel lv;
          lv.bid_volume = static_cast<std::int64_t>(bid_volumes[k]);
          lv.ask_volume = static_cast<std::int64_t>(ask_volumes[k]);
          lv.bid_price = 1;
          lv.ask_price = 2;
          row.levels.push_back(lv);
        }
        return lrm::compute_disbalance(row);
      },
      py::arg("bid_volumes"), py::arg("ask_volumes"));
  m.def(
      "load_day",
      [](const std::filesystem::path& message, const std::filesystem::path& orderbook,
         std::size_t levels) {
        lrm::DaySeries d = lrm::load_day(message, orderbook, levels);
        py::dict out;
        out["disbalance_real"] = d.disbalance_real;
        out["disbalance_events"] = d.disbalance_events;
        out["midprice_real"] = d.midprice_real;
        out["midprice_events"] = d.midprice_events;
        out["message_rows"] = d.message_rows;
        out["warnings"] = d.warnings;
        return out;
      },
      py::arg("message_path"), py::arg("orderbook_path"), py::arg("levels") = 10);
  m.def("trim_day", &lrm::trim_day, py::arg("series"), py::arg("epsilon") = 0.05);
  m.def("stitch_days", [](const std::vector<lrm::Series>& days) { return lrm::stitch_days(days); });
  m.def("to_event_time", &lrm::to_event_time);
  m.def("flow_intensity", &lrm::flow_intensity);
  m.def("resample_uniform", &lrm::resample_uniform, py::arg("series"), py::arg("step"));

  // classical estimators
  m.def(
      "periodogram",
      [](const lrm::Series& s, const Array& freqs, unsigned threads) {
        const auto f = to_vector(freqs);
        const auto p = lrm::periodogram(s, f, threads);
        return to_array(p.power);
      },
      py::arg("series"), py::arg("frequencies"), py::arg("threads") = 1);
  m.def(
      "fit_two_regime_psd",
      [](const Array& freqs, const Array& power, std::size_t min_points) {
        lrm::PsdEstimate e;
        e.frequencies = to_vector(freqs);
        e.power = to_vector(power);
        const auto f = lrm::fit_two_regime_psd(e, min_points);
        py::dict d;
        d["beta1"] = f.beta_low;
        d["beta2"] = f.beta_high;
        d["f_break"] = f.f_break;
        d["H"] = lrm::hurst_from_psd(f.beta_low, f.stderr_low).H;
        return d;
      },
      py::arg("frequencies"), py::arg("power"), py::arg("min_points_per_side") = 8);
  m.def(
      "rescaled_range",
      [](const Array& values, std::optional<std::vector<std::size_t>> n_list) {
        const auto u = uniform(values, 1.0);
        const auto n = n_list ? *n_list : lrm::default_window_sizes(u.size());
        const auto c = lrm::rescaled_range(u, n);
        py::dict d;
        d["H"] = c.H;
        d["stderr"] = c.slope_stderr;
        d["n"] = c.n_values;
        d["rs"] = c.rs_means;
        return d;
      },
      py::arg("values"), py::arg("n_list") = py::none());
  m.def(
      "mfdfa",
      [](const Array& values, std::optional<std::vector<std::size_t>> n_list,
         std::optional<std::vector<double>> q_list) {
        const auto u = uniform(values, 1.0);
        const auto n = n_list ? *n_list : lrm::default_window_sizes(u.size());
        const auto q = q_list ? *q_list : lrm::default_q_values();
        const auto s = lrm::mfdfa(u, n, q);
        py::dict hq;
        for (const auto& g : s.hurst)
          hq[py::float_(g.q)] = g.H ? py::object(py::float_(*g.H)) : py::object(py::none());
        py::dict d;
        d["q"] = s.q_values;
        d["n"] = s.n_values;
        d["F"] = s.F;
        d["hurst"] = hq;
        return d;
      },
      py::arg("values"), py::arg("n_list") = py::none(), py::arg("q_list") = py::none());

  // burst duration analysis
  m.def(
      "threshold_passages",
      [](const lrm::Series& s, double h) { return to_array(lrm::threshold_passages(s, h).times); },
      py::arg("series"), py::arg("threshold"));
  m.def(
      "durations",
      [](const lrm::Series& s, double h) {
        const auto p = lrm::extract_durations(lrm::threshold_passages(s, h), s.domain, s.size());
        return py::make_tuple(to_array(p.bursts.durations), to_array(p.interbursts.durations));
      },
      py::arg("series"), py::arg("threshold"));
  m.def(
      "log_binned_pdf",
      [](const Array& durations, int bpd) {
        const auto p = lrm::log_binned_pdf(to_vector(durations), bpd);
        std::vector<double> centers;
        for (std::size_t i = 0; i < p.bins(); ++i) centers.push_back(p.center(i));
        py::dict d;
        d["edges"] = to_array(p.bin_edges);
        d["centers"] = to_array(centers);
        d["density"] = to_array(p.densities);
        d["counts"] = p.counts;
        return d;
      },
      py::arg("durations"), py::arg("bins_per_decade") = 10);
  m.def(
      "fit_durations",
      [](const Array& durations, int bpd, double min_decades) {
        const auto p = lrm::log_binned_pdf(to_vector(durations), bpd);
        const auto r = lrm::select_fit_region(p, min_decades);
        py::dict d = fit_dict(lrm::fit_powerlaw_region(p, r.T_lo, r.T_hi));
        d["fallback"] = r.fallback;
        return d;
      },
      py::arg("durations"), py::arg("bins_per_decade") = 10, py::arg("min_decades") = 2.0);
  m.def(
      "bda",
      [](const lrm::Series& s, std::optional<std::vector<double>> thresholds, int bpd,
         double min_duration, unsigned threads) {
        lrm::BdaOptions opt;
        opt.bins_per_decade = bpd;
        opt.min_duration = min_duration;
        const auto th = thresholds ? *thresholds : lrm::default_thresholds(s.x);
        const auto segments = lrm::split_days(s);
        const auto rep = lrm::bda_pipeline(segments, th, opt, threads);
        py::list out;
        for (const auto& t : rep.thresholds) {
          py::dict d;
          d["threshold"] = t.threshold;
          d["burst"] = kind_dict(t.burst);
          d["interburst"] = kind_dict(t.interburst);
          d["pooled"] = kind_dict(t.pooled);
          out.append(d);
        }
        return out;
      },
      py::arg("series"), py::arg("thresholds") = py::none(), py::arg("bins_per_decade") = 10,
      py::arg("min_duration") = 0.0, py::arg("threads") = 1);

  // generators
  m.def(
      "gen_fbm",
      [](double hurst, std::size_t length, std::uint64_t seed, bool increments) {
        const auto out = increments ? lrm::FbmOutput::increments : lrm::FbmOutput::motion;
        return to_array(lrm::gen_fbm({hurst, length, seed, out}).values);
      },
      py::arg("hurst"), py::arg("length"), py::arg("seed") = 0, py::arg("increments") = false);
  m.def(
      "gen_brownian",
      [](std::size_t length, std::uint64_t seed) {
        return to_array(lrm::gen_brownian(length, seed).values);
      },
      py::arg("length"), py::arg("seed") = 0);
  m.def(
      "gen_nonlinear_sde",
      [](std::size_t length, std::uint64_t seed, double eta, double lambda, double x_min,
         double x_max, double dt_scale, double obs_step) {
        lrm::SdeSpec spec;
        spec.length = length;
        spec.seed = seed;
        spec.eta = eta;
        spec.lambda = lambda;
        spec.x_min = x_min;
        spec.x_max = x_max;
        spec.dt_scale = dt_scale;
        spec.obs_step = obs_step;
        return lrm::gen_nonlinear_sde(spec);
      },
      py::arg("length"), py::arg("seed") = 0, py::arg("eta") = 2.5, py::arg("lam") = 3.0,
      py::arg("x_min") = 1.0, py::arg("x_max") = 100.0, py::arg("dt_scale") = 1e-4,
      py::arg("obs_step") = 1e-5);

  // batch pipeline
  m.def(
      "run",
      [](const std::string& command, const std::map<std::string, std::string>& settings) {
        lrm::RunConfig config;
        for (const auto& [k, v] : settings) lrm::apply_setting(config, k, v);
        lrm::RunResult r;
        if (command == "ingest") r = lrm::cmd_ingest(config);
        else if (command == "synth") r = lrm::cmd_synth(config);
        else if (command == "analyze") r = lrm::cmd_analyze(config);
        else if (command == "report") r = lrm::cmd_report(config);
        else throw py::value_error("unknown command " + command);
        return py::make_tuple(r.exit_code, r.errors);
      },
      py::arg("command"), py::arg("settings"));
}
