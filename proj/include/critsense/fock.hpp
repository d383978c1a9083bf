#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "critsense/model.hpp"

namespace critsense {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultTailTolerance = 1e-10;

/// Pure state on the truncated number basis {|0>, ..., |N-1>}.
/// Construction checks normalization and the tail mass in the top N/10
/// levels.
class FockVector {
 public:
  explicit FockVector(CVector amps,
                      double tail_tolerance = kDefaultTailTolerance,
                      double norm_tolerance = 1e-9);

  std::size_t cutoff() const noexcept {
    return static_cast<std::size_t>(amps_.size());
  }
  const CVector& amps() const noexcept { return amps_; }
  double norm() const { return amps_.norm(); }

  static FockVector number_state(std::size_t n, std::size_t cutoff);

 private:
  CVector amps_;
};

/// Probability in levels n >= N - N/10.
double tail_mass(const CVector& amps);

/// Truncated H(params) with its parity blocks diagonalized once.
class FockHamiltonian {
 public:
  FockHamiltonian(const ModelParams& params, std::size_t cutoff);

  const ModelParams& params() const noexcept { return params_; }
  std::size_t cutoff() const noexcept { return cutoff_; }

  /// Dense matrix with omega n on the diagonal and
  /// (epsilon/2) sqrt((n+1)(n+2)) at (n, n+2), (n+2, n).
  Eigen::MatrixXd dense() const;

  /// Sorted eigenvalues across both parity sectors.
  std::vector<double> eigenvalues() const;
  /// Normalized eigenvector of the lowest level (the even sector).
  FockVector ground_state(double tail_tolerance = kDefaultTailTolerance) const;

  /// exp(-iHt) psi.
  CVector apply_propagator(const CVector& psi, double t) const;

 private:
  struct Block {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };

  ModelParams params_;
  std::size_t cutoff_;
  Block even_;
  Block odd_;
};

FockHamiltonian build_hamiltonian(const ModelParams& params,
                                  std::size_t cutoff);

FockVector coherent_fock(double alpha, std::size_t cutoff,
                         double tail_tolerance = kDefaultTailTolerance);
FockVector squeezed_vacuum_fock(double r, std::size_t cutoff,
                                double tail_tolerance = kDefaultTailTolerance);

FockVector evolve_fixed(const FockHamiltonian& h, const FockVector& psi0,
                        double t,
                        double tail_tolerance = kDefaultTailTolerance);

/// g(t) = k t / sqrt(1 + (k t)^2) over [0, duration].
class RampSchedule {
 public:
  /// k chosen so that g(duration) == g_final.
  static RampSchedule reaching(double g_final, double duration);
  /// Fixed rate k; g(duration) follows from the formula.
  static RampSchedule with_rate(double k, double duration);

  double rate() const noexcept { return rate_; }
  double duration() const noexcept { return duration_; }
  double g_at(double t) const;
  double g_final() const { return g_at(duration_); }

 private:
  RampSchedule(double k, double duration) : rate_(k), duration_(duration) {}
  double rate_;
  double duration_;
};

struct RampOptions {
  /// epsilon(t) = drive_scale * g(t); defaults to base.omega(). Setting it
  /// to a different value while varying base.omega() gives the omega family
  /// at fixed epsilon(t).
  std::optional<double> drive_scale;
  double tail_tolerance = kDefaultTailTolerance;
  double norm_tolerance = 1e-8;
  /// Largest dt * ||H|| allowed; RK4 is unstable past 2 sqrt(2).
  double stability_limit = 2.5;
  /// Use exactly this many steps instead of deriving them from dt. Needed
  /// when neighbouring parameter values must share one time grid.
  /// StepTooLarge if the resulting step violates the stability limit.
  std::optional<std::size_t> fixed_steps;
};

struct RampResult {
  FockVector state;
  double norm_drift;  // | ||psi||^2 - 1 | at the end, never renormalized
  std::size_t steps;
  double step;        // dt after stability subdivision
};

/// Fixed-step RK4 integration of i dpsi/dt = H(t) psi over the schedule,
/// with omega = base.omega(). The requested dt is subdivided when needed so
/// that dt * ||H|| stays inside the stability limit.
RampResult evolve_ramp(const RampSchedule& schedule, const ModelParams& base,
                       const FockVector& psi0, double dt,
                       const RampOptions& options = {});

/// |<psi|phi>|^2; the shorter vector is zero-padded when pad is true.
double fidelity(const FockVector& psi, const FockVector& phi, bool pad = true);

struct QfiEstimate {
  double value;            // step delta
  double value_half_step;  // step delta/2
  double extrapolated;     // Richardson combination, O(delta^4)
  double relative_spread;
};

using StateFamily = std::function<FockVector(double)>;

/// 8 (1 - |<psi(theta - d)|psi(theta + d)>|) / (2d)^2, validated against
/// the same estimate at d/2 (StepTooLarge beyond 1% spread).
QfiEstimate qfi_overlap(const StateFamily& family, double theta, double delta);

struct FockMoments {
  double mean_x;
  double mean_p;
  double var_x;
  double var_p;
  double cov_xp;
  double var_x2;
  double mean_n;
};

FockMoments moments_fock(const FockVector& psi);

/// Cutoff selection by doubling: evaluate at N and 2N (starting from
/// `start`) until every observable agrees within tol (absolute below 1,
/// relative above) and no TruncationError is raised.
struct CutoffChoice {
  std::size_t cutoff;
  std::vector<double> observables;
};
CutoffChoice converge_cutoff(
    const std::function<std::vector<double>(std::size_t)>& observe,
    double tol, std::size_t start = 64, std::size_t max_cutoff = 4096);

}  // namespace critsense
