#pragma once

namespace lrm {

/// A Hurst exponent with its propagated standard error. in_model_range is
/// false when the underlying exponent fell outside the range for which the
/// conversion formula is meaningful; the value is still reported.
struct HurstEstimate {
  double H = 0.0;
  double stderr = 0.0;
  bool in_model_range = true;
};

}  // namespace lrm
