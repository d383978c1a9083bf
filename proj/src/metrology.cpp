#include "critsense/metrology.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "critsense/errors.hpp"
#include "critsense/gaussian.hpp"

namespace critsense {

using std::numbers::pi;
using std::numbers::sqrt2;

DynamicProbe::DynamicProbe(const ModelParams& params, double alpha)
    : params_(params), alpha_(alpha) {
  require_gapped(params);
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidArgument(fmt::format("coherent amplitude must be a nonnegative real, got {}", alpha));
  }
  const double g = params.g();
  lambda_ = 4.0 * params.omega() * params.omega() * (1.0 - g) * (1.0 + g);
  var_x2_initial_ = 4.0 * alpha * alpha + 0.5;
}

double DynamicProbe::frequency() const noexcept { return 0.5 * std::sqrt(lambda_); }

namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw InvalidArgument(fmt::format("evolution time must be finite and nonnegative, got {}", t));
  }
}

// sqrt((1+g)/(1-g)) = (1+g)/sqrt(1-g^2)
double mean_amplitude(double g) { return std::sqrt((1.0 + g) / (1.0 - g)); }

}  // namespace

double qfi_dynamic(const DynamicProbe& probe, double t) {
  require_time(t);
  const double w = probe.params().omega();
  const double g = probe.params().g();
  const double lambda = probe.lambda();
  const double root = std::sqrt(lambda);
  const double x = root * t;

  // bracket = [sin(x) - x] / Lambda^{3/2}
  double bracket;
  if (x < 1e-3) {
    bracket = t * t * t * (-1.0 / 6.0 + x * x / 120.0);
  } else {
    bracket = (std::sin(x) - x) / (lambda * root);
  }
  const double w3 = w * w * w;
  return 16.0 * w3 * w3 * (1.0 + g) * (1.0 + g) * bracket * bracket * probe.var_x2_initial();
}

double mean_p(const DynamicProbe& probe, double t) {
  require_time(t);
  const double g = probe.params().g();
  return -sqrt2 * probe.alpha() * mean_amplitude(g) * std::sin(probe.frequency() * t);
}

double var_p(const DynamicProbe& probe, double t) {
  require_time(t);
  const double g = probe.params().g();
  const double c = std::cos(probe.frequency() * t);
  const double s = std::sin(probe.frequency() * t);
  return 0.5 * c * c + (1.0 + g) / (2.0 * (1.0 - g)) * s * s;
}

double susceptibility(const DynamicProbe& probe, double t) {
  require_time(t);
  const double w = probe.params().omega();
  const double g = probe.params().g();
  const double one_minus_g2 = (1.0 - g) * (1.0 + g);
  const double amp = mean_amplitude(g);
  const double phase = probe.frequency() * t;
  // Both the prefactor and the frequency depend on g.
  const double d_amp = amp / one_minus_g2;
  const double d_phase = -w * g * t / std::sqrt(one_minus_g2);
  return -sqrt2 * probe.alpha() * (d_amp * std::sin(phase) + amp * std::cos(phase) * d_phase);
}

double inverted_variance(const DynamicProbe& probe, double t) {
  const double chi = susceptibility(probe, t);
  return chi * chi / var_p(probe, t);
}

double revival_time(const ModelParams& params, std::size_t n) {
  require_gapped(params);
  if (n == 0) throw InvalidArgument("revival index starts at 1");
  const double g = params.g();
  return static_cast<double>(n) * pi / (params.omega() * std::sqrt((1.0 - g) * (1.0 + g)));
}

std::vector<RevivalIndex> revival_times(const ModelParams& params, std::size_t n_max) {
  require_gapped(params);
  if (n_max == 0) throw InvalidArgument("n_max must be positive");
  std::vector<RevivalIndex> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) out.push_back({n, revival_time(params, n)});
  return out;
}

double inverted_variance_peak(const ModelParams& params, double alpha, std::size_t n) {
  require_gapped(params);
  const double g = params.g();
  const double nn = static_cast<double>(n);
  const double one_minus = 1.0 - g;
  return 4.0 * nn * nn * pi * pi * alpha * alpha * g * g /
         ((1.0 + g) * one_minus * one_minus * one_minus);
}

double revival_ratio(double g, double alpha) {
  const double a2 = alpha * alpha;
  return 4.0 * a2 * g * g / (4.0 * a2 + 0.5);
}

double qfi_adiabatic_omega(const ModelParams& params) {
  require_gapped(params);
  const double w = params.omega();
  return snr_omega(params) / (w * w);
}

double snr_omega(const ModelParams& params) {
  require_gapped(params);
  const double g = params.g();
  const double d = (1.0 + g) * (1.0 - g);
  return g * g / (2.0 * d * d);
}

double homodyne_weight(double r, double phi) {
  const double c2 = std::cos(phi) * std::cos(phi);
  const double s2 = std::sin(phi) * std::sin(phi);
  const double up = c2 * std::exp(2.0 * r);
  const double down = s2 * std::exp(-2.0 * r);
  const double q = (up - down) / (up + down);
  return q * q;
}

double homodyne_fisher(const ModelParams& params, double phi) {
  const Spectrum levels = spectrum(params);
  const double w = params.omega();
  const double g = params.g();
  // dr/domega at fixed epsilon, using dg/domega = -g/omega.
  const double dr = g / (2.0 * w * (1.0 - g) * (1.0 + g));

  const GaussianState ground = squeezed_vacuum_gaussian(levels.squeeze);
  const RotatedMoment m = rotated_quadrature_moment(ground, phi);
  const double c2 = std::cos(phi) * std::cos(phi);
  const double s2 = std::sin(phi) * std::sin(phi);
  // d<X_phi^2>/dr for the squeezed vacuum.
  const double dmean_sq = c2 * std::exp(2.0 * levels.squeeze) - s2 * std::exp(-2.0 * levels.squeeze);
  const double slope = dmean_sq * dr;
  return slope * slope / m.var_of_sq;
}

HomodyneOptimum homodyne_fisher_max(const ModelParams& params) {
  // f(phi) <= 1 with equality at phi = 0 (mod pi/2).
  return HomodyneOptimum{homodyne_fisher(params, 0.0), 0.0};
}

}  // namespace critsense
