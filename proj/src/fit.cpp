#include "critsense/fit.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "critsense/errors.hpp"

namespace critsense {

FitResult fit_power_law(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw InvalidArgument("fit inputs differ in length");
  if (t.size() < 3) {
    throw FitError(fmt::format("power-law fit needs at least 3 points, got {}", t.size()));
  }
  const auto n = static_cast<double>(t.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(v[i] > 0.0)) {
      throw FitError(fmt::format("power-law fit needs positive data, got ({}, {})", t[i], v[i]));
    }
    const double x = std::log(t[i]);
    const double y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  const double var_x = sxx / n - mx * mx;
  if (!(var_x > 0.0)) throw FitError("power-law fit needs distinct abscissae");
  const double slope = (sxy / n - mx * my) / var_x;
  const double intercept = my - slope * mx;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = std::log(v[i]);
    const double r = y - (intercept + slope * std::log(t[i]));
    ss_res += r * r;
    ss_tot += (y - my) * (y - my);
  }
  const double r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return FitResult{std::exp(intercept), slope, r2, t.size()};
}

std::vector<SampledMaximum> window_maxima(std::span<const double> t, std::span<const double> values,
                                          std::span<const double> window_lo,
                                          std::span<const double> window_hi) {
  if (t.size() != values.size() || window_lo.size() != window_hi.size()) {
    throw InvalidArgument("window_maxima inputs differ in length");
  }
  std::vector<SampledMaximum> out;
  for (std::size_t w = 0; w < window_lo.size(); ++w) {
    bool found = false;
    SampledMaximum best{};
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] <= window_lo[w] || t[i] >= window_hi[w]) continue;
      if (!found || values[i] > best.value) best = {i, t[i], values[i]};
      found = true;
    }
    if (!found) {
      throw FitError(fmt::format("no samples in window ({}, {})", window_lo[w], window_hi[w]));
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace critsense
