#include "critsense/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "critsense/errors.hpp"

namespace critsense {

ModelParams make_params(double omega, double g) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw InvalidArgument(fmt::format("omega must be positive and finite, got {}", omega));
  }
  if (!std::isfinite(g)) {
    throw InvalidArgument(fmt::format("g must be finite, got {}", g));
  }
  return ModelParams(omega, g);
}

ModelParams with_omega_fixed_drive(const ModelParams& p, double omega) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw InvalidArgument(fmt::format("omega must be positive and finite, got {}", omega));
  }
  return make_params(omega, p.epsilon() / omega);
}

void require_gapped(const ModelParams& p) {
  if (p.g() < 0.0) {
    throw InvalidArgument(fmt::format("g must be nonnegative, got {}", p.g()));
  }
  if (p.g() >= 1.0) {
    throw GaplessPhase(
        fmt::format("g = {} >= 1: the excitation gap vanishes and the spectrum is continuous", p.g()));
  }
}

double squeeze_parameter(double g) {
  if (!(g >= 0.0)) throw InvalidArgument(fmt::format("g must be nonnegative, got {}", g));
  if (g >= 1.0) throw GaplessPhase(fmt::format("squeeze parameter diverges at g = {}", g));
  // log1p keeps r accurate for small g.
  return 0.25 * (std::log1p(-g) - std::log1p(g));
}

Spectrum spectrum(const ModelParams& p) {
  require_gapped(p);
  const double gap = p.omega() * std::sqrt((1.0 - p.g()) * (1.0 + p.g()));
  return Spectrum{gap, 0.5 * gap - 0.5 * p.omega(), squeeze_parameter(p.g())};
}

double eigen_energy(const ModelParams& p, std::size_t n) {
  const Spectrum s = spectrum(p);
  return static_cast<double>(n) * s.excitation_energy + s.ground_energy;
}

}  // namespace critsense
