#include "lrm/synth.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <string>

#include "lrm/error.hpp"

namespace lrm {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw Error("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// In-place forward transform of n points.
void forward_fft(fftw_complex* data, std::size_t n) {
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW plan creation failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

double reflect(double x, double lo, double hi) {
  const double w = hi - lo;
  if (!(w > 0.0)) return lo;
  double y = std::fmod(x - lo, 2.0 * w);
  if (y < 0.0) y += 2.0 * w;
  if (y > w) y = 2.0 * w - y;
  return lo + y;
}

}  // namespace

double fgn_autocovariance(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) +
                std::pow(std::fabs(kk - 1.0), h2));
}

FbmGenerator::FbmGenerator(double hurst, std::size_t length) : hurst_(hurst), length_(length) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw Error("Hurst exponent must lie in (0, 1)");
  if (!is_power_of_two(length))
    throw Error("fBm length must be a power of two >= 2, got " + std::to_string(length));

  const std::size_t M = 2 * length;
  FftwBuffer c(M);
  for (std::size_t k = 0; k <= length; ++k) {
    c.data[k][0] = fgn_autocovariance(hurst, k);
    c.data[k][1] = 0.0;
  }
  for (std::size_t k = length + 1; k < M; ++k) {
    c.data[k][0] = c.data[M - k][0];
    c.data[k][1] = 0.0;
  }
  forward_fft(c.data, M);

  scale_.resize(M);
  for (std::size_t k = 0; k < M; ++k) {
    double lambda = c.data[k][0];
    if (lambda < -1e-8)
      throw Error("circulant embedding has a negative eigenvalue " + std::to_string(lambda));
    lambda = std::max(lambda, 0.0);
    scale_[k] = std::sqrt(lambda / static_cast<double>(M));
  }
}

UniformSeries FbmGenerator::generate(std::uint64_t seed, FbmOutput output) const {
  const std::size_t M = scale_.size();
  FftwBuffer w(M);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (std::size_t k = 0; k < M; ++k) {
    const double a = normal(rng);
    const double b = normal(rng);
    w.data[k][0] = scale_[k] * a;
    w.data[k][1] = scale_[k] * b;
  }
  forward_fft(w.data, M);

  UniformSeries out;
  out.domain = TimeDomain::event_ticks;
  out.step = 1.0;
  out.values.resize(length_);
  if (output == FbmOutput::increments) {
    for (std::size_t k = 0; k < length_; ++k) out.values[k] = w.data[k][0];
  } else {
    double sum = 0.0;
    for (std::size_t k = 0; k < length_; ++k) {
      out.values[k] = sum;
      sum += w.data[k][0];
    }
  }
  return out;
}

UniformSeries gen_fbm(const FbmSpec& spec) {
  return FbmGenerator(spec.hurst, spec.length).generate(spec.seed, spec.output);
}

UniformSeries gen_brownian(std::size_t length, std::uint64_t seed) {
  return gen_fbm({0.5, length, seed, FbmOutput::motion});
}

Series gen_nonlinear_sde(const SdeSpec& spec) {
  if (!(spec.x_min > 0.0)) throw Error("SDE x_min must be positive");
  if (!(spec.x_max > spec.x_min)) throw Error("SDE x_max must exceed x_min");
  if (!(spec.eta > 1.0)) throw Error("SDE eta must exceed 1");
  if (!(spec.dt_scale > 0.0)) throw Error("SDE dt_scale must be positive");
  if (!(spec.obs_step > 0.0)) throw Error("SDE obs_step must be positive");
  if (spec.length == 0) throw Error("SDE length must be positive");
  const double k2 = spec.dt_scale;
  const double dt_min = k2 * std::pow(spec.x_max, 2.0 - 2.0 * spec.eta);
  if (dt_min < 1e-12)
    throw Error("SDE step underflow: dt = " + std::to_string(dt_min) +
                " at x_max; use a larger dt_scale or a smaller x_max");

  const double kappa = std::sqrt(k2);
  const double drift = k2 * (spec.eta - spec.lambda / 2.0);
  const double power = 2.0 - 2.0 * spec.eta;
  double x = spec.x0 == 0.0 ? spec.x_min : reflect(spec.x0, spec.x_min, spec.x_max);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;

  Series out;
  out.domain = TimeDomain::real_time_seconds;
  out.t.resize(spec.length);
  out.x.resize(spec.length);
  out.origin.recipe = "nonlinear-sde";

  std::size_t i = 0;
  double t = 0.0;
  while (i < spec.length) {
    const double dt = k2 * std::pow(x, power);
    const double t_next = t + dt;
    for (; i < spec.length; ++i) {
      const double ti = static_cast<double>(i) * spec.obs_step;
      if (!(ti < t_next)) break;
      out.t[i] = ti;
      out.x[i] = x;
    }
    x += drift * x + kappa * x * normal(rng);
    if (x < spec.x_min || x > spec.x_max) x = reflect(x, spec.x_min, spec.x_max);
    t = t_next;
  }
  return out;
}

}  // namespace lrm
