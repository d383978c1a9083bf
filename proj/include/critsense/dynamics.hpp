#pragma once

#include <cstddef>
#include <map>
#include <memory>

#include "critsense/fock.hpp"
#include "critsense/gaussian.hpp"
#include "critsense/metrology.hpp"

namespace critsense {

/// Observables of the dynamic protocol, independent of how they are
/// computed. Derivatives in g are taken at fixed omega and t.
class DynamicsEngine {
 public:
  virtual ~DynamicsEngine() = default;
  virtual double mean_p(double t) = 0;
  virtual double var_p(double t) = 0;
  virtual double susceptibility(double t) = 0;
  virtual double qfi(double t) = 0;

  double inverted_variance(double t) {
    const double chi = susceptibility(t);
    return chi * chi / var_p(t);
  }
};

/// Closed forms; qfi is the near-critical formula with Lambda.
class AnalyticDynamics final : public DynamicsEngine {
 public:
  AnalyticDynamics(const ModelParams& params, double alpha) : probe_(params, alpha) {}
  double mean_p(double t) override { return critsense::mean_p(probe_, t); }
  double var_p(double t) override { return critsense::var_p(probe_, t); }
  double susceptibility(double t) override { return critsense::susceptibility(probe_, t); }
  double qfi(double t) override { return qfi_dynamic(probe_, t); }

 private:
  DynamicProbe probe_;
};

/// Symplectic flow of the coherent state; susceptibility by central
/// difference in g, qfi from the exact pure-Gaussian formula.
class GaussianDynamics final : public DynamicsEngine {
 public:
  GaussianDynamics(const ModelParams& params, double alpha, double g_step = 1e-6);
  double mean_p(double t) override;
  double var_p(double t) override;
  double susceptibility(double t) override;
  double qfi(double t) override;

 private:
  GaussianState at(double g, double t) const;
  ModelParams params_;
  GaussianState initial_;
  double g_step_;
};

/// Truncated number-basis evolution. The cutoff is fixed at construction
/// by doubling until the moments at t_max converge; Hamiltonians at the
/// perturbed g values are cached.
class FockDynamics final : public DynamicsEngine {
 public:
  FockDynamics(const ModelParams& params, double alpha, double t_max, double g_step = 1e-5,
               double qfi_step = 1e-4);
  double mean_p(double t) override;
  double var_p(double t) override;
  double susceptibility(double t) override;
  double qfi(double t) override;

  std::size_t cutoff() const noexcept { return cutoff_; }
  FockMoments moments(double t);

 private:
  const FockHamiltonian& hamiltonian(double g);
  FockVector evolved(double g, double t);

  ModelParams params_;
  double alpha_;
  double g_step_;
  double qfi_step_;
  std::size_t cutoff_ = 0;
  std::map<double, std::unique_ptr<FockHamiltonian>> cache_;
};

}  // namespace critsense
