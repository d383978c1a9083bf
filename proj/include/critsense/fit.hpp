#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace critsense {

/// V = C t^D fitted by linear least squares on (ln t, ln V).
struct FitResult {
  double amplitude;  // C
  double exponent;   // D
  double r_squared;
  std::size_t points_used;
};

/// Requires at least three strictly positive points (FitError otherwise).
FitResult fit_power_law(std::span<const double> t, std::span<const double> v);

struct SampledMaximum {
  std::size_t index;
  double t;
  double value;
};

/// Grid argmax of `values` restricted to each open window (lo, hi).
/// Windows without a sample are reported as FitError.
std::vector<SampledMaximum> window_maxima(std::span<const double> t,
                                          std::span<const double> values,
                                          std::span<const double> window_lo,
                                          std::span<const double> window_hi);

}  // namespace critsense
