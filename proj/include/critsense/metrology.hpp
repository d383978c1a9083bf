#pragma once

#include <cstddef>
#include <vector>

#include "critsense/model.hpp"

namespace critsense {

/// Dynamic sensing setup: coherent |alpha> evolved under a fixed H(g).
/// Construction enforces 0 <= g < 1 and alpha >= 0.
class DynamicProbe {
 public:
  DynamicProbe(const ModelParams& params, double alpha);

  const ModelParams& params() const noexcept { return params_; }
  double alpha() const noexcept { return alpha_; }
  /// Lambda = 4 omega^2 (1 - g^2).
  double lambda() const noexcept { return lambda_; }
  /// Var(X^2) of the initial coherent state, 4 alpha^2 + 1/2.
  double var_x2_initial() const noexcept { return var_x2_initial_; }
  /// Omega = omega sqrt(1 - g^2), the oscillation frequency of <P>.
  double frequency() const noexcept;

 private:
  ModelParams params_;
  double alpha_;
  double lambda_;
  double var_x2_initial_;
};

struct RevivalIndex {
  std::size_t n;
  double time;
};

double qfi_dynamic(const DynamicProbe& probe, double t);
double mean_p(const DynamicProbe& probe, double t);
double var_p(const DynamicProbe& probe, double t);
/// d<P>/dg at fixed omega and t.
double susceptibility(const DynamicProbe& probe, double t);
/// chi^2 / Var(P).
double inverted_variance(const DynamicProbe& probe, double t);

/// T_n = n pi / (omega sqrt(1 - g^2)).
double revival_time(const ModelParams& params, std::size_t n);
std::vector<RevivalIndex> revival_times(const ModelParams& params,
                                        std::size_t n_max);
/// 4 n^2 pi^2 alpha^2 g^2 / ((1 + g)(1 - g)^3).
double inverted_variance_peak(const ModelParams& params, double alpha,
                              std::size_t n);
/// V(T_n)/I(T_n) = 4 alpha^2 g^2 / (4 alpha^2 + 1/2), independent of n.
double revival_ratio(double g, double alpha);

/// Ground-state QFI for omega, taken at fixed drive strength epsilon.
double qfi_adiabatic_omega(const ModelParams& params);
double snr_omega(const ModelParams& params);

/// f(phi) weighting of the homodyne Fisher information.
double homodyne_weight(double r, double phi);
/// |d_omega <X_phi^2>|^2 / Var(X_phi^2) on the ground state.
double homodyne_fisher(const ModelParams& params, double phi);

struct HomodyneOptimum {
  double fisher;
  double phi;
};
HomodyneOptimum homodyne_fisher_max(const ModelParams& params);

}  // namespace critsense
