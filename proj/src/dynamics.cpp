#include "critsense/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "critsense/errors.hpp"

namespace critsense {

GaussianDynamics::GaussianDynamics(const ModelParams& params, double alpha, double g_step)
    : params_(params), initial_(coherent_gaussian(alpha)), g_step_(g_step) {
  require_gapped(params);
}

GaussianState GaussianDynamics::at(double g, double t) const {
  return propagate(make_params(params_.omega(), g), initial_, t);
}

double GaussianDynamics::mean_p(double t) { return at(params_.g(), t).mean(1); }

double GaussianDynamics::var_p(double t) { return at(params_.g(), t).cov(1, 1); }

double GaussianDynamics::susceptibility(double t) {
  const double g = params_.g();
  return (at(g + g_step_, t).mean(1) - at(g - g_step_, t).mean(1)) / (2.0 * g_step_);
}

double GaussianDynamics::qfi(double t) {
  const double g = params_.g();
  const GaussianState up = at(g + g_step_, t);
  const GaussianState down = at(g - g_step_, t);
  const Vec2 dmean = (up.mean - down.mean) / (2.0 * g_step_);
  const Mat2 dcov = (up.cov - down.cov) / (2.0 * g_step_);
  return pure_gaussian_qfi(at(g, t), dmean, dcov);
}

FockDynamics::FockDynamics(const ModelParams& params, double alpha, double t_max, double g_step,
                           double qfi_step)
    : params_(params), alpha_(alpha), g_step_(g_step), qfi_step_(qfi_step) {
  require_gapped(params);
  if (params.g() + std::max(g_step, qfi_step) >= 1.0) {
    throw GaplessPhase("finite-difference stencil crosses the critical point");
  }

  // Photon number peaks at odd multiples of T1/2; probe those and the end.
  const double half_period = 0.5 * revival_time(params, 1);
  std::vector<double> probes{t_max};
  for (double t = half_period; t <= t_max; t += 2.0 * half_period) probes.push_back(t);
  const double g_hi = params.g() + std::max(g_step, qfi_step);

  const CutoffChoice choice = converge_cutoff(
      [&](std::size_t n) {
        const FockVector psi0 = coherent_fock(alpha, n);
        std::vector<double> obs;
        for (double g : {params.g(), g_hi}) {
          const FockHamiltonian h(make_params(params.omega(), g), n);
          for (double t : probes) {
            const FockMoments m = moments_fock(evolve_fixed(h, psi0, t));
            obs.insert(obs.end(), {m.mean_x, m.mean_p, m.var_x, m.var_p});
          }
        }
        return obs;
      },
      1e-9);
  cutoff_ = choice.cutoff;
}

const FockHamiltonian& FockDynamics::hamiltonian(double g) {
  auto it = cache_.find(g);
  if (it == cache_.end()) {
    it = cache_.emplace(g, std::make_unique<FockHamiltonian>(make_params(params_.omega(), g), cutoff_))
             .first;
  }
  return *it->second;
}

FockVector FockDynamics::evolved(double g, double t) {
  return evolve_fixed(hamiltonian(g), coherent_fock(alpha_, cutoff_), t);
}

FockMoments FockDynamics::moments(double t) { return moments_fock(evolved(params_.g(), t)); }

double FockDynamics::mean_p(double t) { return moments(t).mean_p; }

double FockDynamics::var_p(double t) { return moments(t).var_p; }

double FockDynamics::susceptibility(double t) {
  const double g = params_.g();
  const double up = moments_fock(evolved(g + g_step_, t)).mean_p;
  const double down = moments_fock(evolved(g - g_step_, t)).mean_p;
  return (up - down) / (2.0 * g_step_);
}

double FockDynamics::qfi(double t) {
  return qfi_overlap([&](double g) { return evolved(g, t); }, params_.g(), qfi_step_).extrapolated;
}

}  // namespace critsense
