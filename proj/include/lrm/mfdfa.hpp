#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrm/series.hpp"

namespace lrm {

struct GeneralizedHurst {
  double q = 0.0;
  std::optional<double> H;  // empty when the fit is degenerate
  double stderr = 0.0;
};

/// Fluctuation functions F_q(n) on a (q, n) grid.
struct MfdfaSurface {
  std::vector<double> q_values;
  std::vector<std::size_t> n_values;
  std::vector<double> F;  // row-major: F[qi * n_values.size() + ni]
  std::vector<GeneralizedHurst> hurst;
  std::vector<std::string> warnings;

  [[nodiscard]] double at(std::size_t qi, std::size_t ni) const {
    return F[qi * n_values.size() + ni];
  }
};

/// MF-DFA with linear detrending. The mean-removed cumulative profile is cut
/// into floor(N/n) boxes from the start and as many from the end; for q != 0
///   F_q(n) = { mean_j [F^2(n,j)]^(q/2) }^(1/q)
/// and F_0(n) = exp{ mean_j ln F^2(n,j) / 2 }. Boxes with F^2 = 0 are left
/// out for q <= 0. Box sizes must lie in [8, N/4]. `hurst` is filled when
/// at least three box sizes are given.
MfdfaSurface mfdfa(const UniformSeries& u, std::span<const std::size_t> n_list,
                   std::span<const double> q_list);

/// Per-q slope of lg F_q(n) against lg n. Requires at least three n values.
std::vector<GeneralizedHurst> generalized_hurst(const MfdfaSurface& surface);

/// {-4, -3, -2, -1, -0.5, 0, 0.5, 1, 2, 3, 4}
std::vector<double> default_q_values();

}  // namespace lrm
