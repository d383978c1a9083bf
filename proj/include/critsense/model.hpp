#pragma once

#include <cstddef>

namespace critsense {

/// Parameters of H = omega a^dag a + (epsilon/2)(a^dag^2 + a^2).
/// omega and g are stored; epsilon is derived so that g == epsilon/omega
/// holds by construction.
class ModelParams {
 public:
  double omega() const noexcept { return omega_; }
  double g() const noexcept { return g_; }
  double epsilon() const noexcept { return g_ * omega_; }

  friend ModelParams make_params(double omega, double g);

 private:
  ModelParams(double omega, double g) : omega_(omega), g_(g) {}
  double omega_;
  double g_;
};

/// Throws InvalidArgument for omega <= 0 or non-finite inputs.
ModelParams make_params(double omega, double g);

/// Same model with omega replaced and epsilon held fixed.
ModelParams with_omega_fixed_drive(const ModelParams& p, double omega);

struct Spectrum {
  double excitation_energy;  // e_np
  double ground_energy;      // E_np
  double squeeze;            // r
};

/// Rejects g < 0 (InvalidArgument) and g >= 1 (GaplessPhase).
void require_gapped(const ModelParams& p);

/// r = (1/4) ln((1-g)/(1+g)); g in [0, 1).
double squeeze_parameter(double g);

Spectrum spectrum(const ModelParams& p);

double eigen_energy(const ModelParams& p, std::size_t n);

}  // namespace critsense
