#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lrm/series.hpp"

namespace lrm {

enum class FbmOutput : std::uint8_t { motion, increments };

struct FbmSpec {
  double hurst = 0.5;
  std::size_t length = 0;  // power of two, at least 2
  std::uint64_t seed = 0;
  FbmOutput output = FbmOutput::motion;
};

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t k);

/// Exact fGn by circulant embedding of size 2N. The square-rooted eigenvalue
/// spectrum is computed once, so repeated draws with different seeds only
/// cost one FFT each. Thread-safe for concurrent generate() calls.
class FbmGenerator {
 public:
  FbmGenerator(double hurst, std::size_t length);

  /// Increments have unit variance. Motion starts at 0 and has `length`
  /// points, the k-th being the sum of the first k increments.
  [[nodiscard]] UniformSeries generate(std::uint64_t seed, FbmOutput output) const;

  [[nodiscard]] double hurst() const noexcept { return hurst_; }
  [[nodiscard]] std::size_t length() const noexcept { return length_; }

 private:
  double hurst_;
  std::size_t length_;
  std::vector<double> scale_;  // sqrt(lambda_k / M)
};

/// Series on the tick axis (step 1).
UniformSeries gen_fbm(const FbmSpec& spec);
UniformSeries gen_brownian(std::size_t length, std::uint64_t seed);

/// dx = (eta - lambda/2) x^(2 eta - 1) dt + x^eta dW on [x_min, x_max] with
/// reflecting walls.
struct SdeSpec {
  double eta = 2.5;
  double lambda = 3.0;
  double x_min = 1.0;
  double x_max = 100.0;
  double dt_scale = 1e-4;  // kappa^2
  double obs_step = 1e-5;  // observation grid spacing
  std::size_t length = 0;
  std::uint64_t seed = 0;
  double x0 = 0.0;  // start value; 0 means x_min
};

/// Euler scheme with variable step dt = kappa^2 x^(2 - 2 eta). Overshoots are
/// folded back into the band. The returned series holds the state at
/// t_i = i * obs_step (last value carried forward).
Series gen_nonlinear_sde(const SdeSpec& spec);

}  // namespace lrm
