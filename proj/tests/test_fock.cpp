#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "critsense/errors.hpp"
#include "critsense/fock.hpp"
#include "critsense/gaussian.hpp"
#include "critsense/metrology.hpp"
#include "critsense/model.hpp"

using namespace critsense;
using std::numbers::pi;

TEST_CASE("FockVector validation") {
  CVector ok = CVector::Zero(64);
  ok(0) = 1.0;
  CHECK_NOTHROW(FockVector{ok});
  CVector bad = ok;
  bad(0) = 1.1;
  CHECK_THROWS_AS(FockVector{bad}, InvalidArgument);
  CVector tail = CVector::Zero(64);
  tail(63) = 1.0;
  CHECK_THROWS_AS(FockVector{tail}, TruncationError);
  CHECK(FockVector::number_state(3, 10).amps()(3) == Complex(1.0));
  CHECK_THROWS_AS(FockVector::number_state(10, 10), InvalidArgument);
  CHECK(tail_mass(tail) == 1.0);
}

TEST_CASE("Hamiltonian matrix elements") {
  const auto h = build_hamiltonian(make_params(1.0, 0.6), 8);
  const auto m = h.dense();
  CHECK(m(3, 3) == 3.0);
  CHECK(m(0, 2) == doctest::Approx(0.3 * std::sqrt(2.0)));
  CHECK(m(2, 0) == m(0, 2));
  CHECK(m(1, 3) == doctest::Approx(0.3 * std::sqrt(6.0)));
  CHECK(m(0, 1) == 0.0);
  CHECK_THROWS_AS(build_hamiltonian(make_params(1.0, 0.6), 2), InvalidArgument);
}

TEST_CASE("lowest levels match the closed-form spectrum") {
  const auto p = make_params(1.0, 0.6);
  const auto h = build_hamiltonian(p, 256);
  const auto ev = h.eigenvalues();
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(std::abs(ev[n] - eigen_energy(p, n)) < 1e-8);
  }
  CHECK(std::abs(ev[0] - (-0.1)) < 1e-8);
}

TEST_CASE("parity blocks reproduce the dense eigenvalues") {
  const auto h = build_hamiltonian(make_params(1.3, 0.8), 60);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(h.dense());
  const auto ev = h.eigenvalues();
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(ev[i] == doctest::Approx(dense.eigenvalues()(static_cast<Eigen::Index>(i))).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("ground state is the squeezed vacuum") {
  for (double g : {0.3, 0.9, 0.96}) {
    const auto gs = build_hamiltonian(make_params(1.0, g), 256).ground_state();
    const auto sq = squeezed_vacuum_fock(squeeze_parameter(g), 256);
    CHECK(fidelity(gs, sq) == doctest::Approx(1.0).epsilon(1e-10));
  }
  const double r = squeeze_parameter(0.96);
  const auto sq = squeezed_vacuum_fock(r, 256);
  CHECK(std::abs(sq.amps()(0)) == doctest::Approx(1.0 / std::sqrt(std::cosh(r))).epsilon(1e-12));
  CHECK(fidelity(FockVector::number_state(0, 256), sq) == doctest::Approx(0.661437827766147648).epsilon(1e-12));

  // Bogoliubov condition (cosh r a - sinh r a^dag)|psi> = 0.
  const auto& amps = sq.amps();
  double residual = 0.0;
  for (Eigen::Index n = 0; n + 1 < amps.size(); ++n) {
    Complex v = std::cosh(r) * std::sqrt(double(n + 1)) * amps(n + 1);
    if (n > 0) v -= std::sinh(r) * std::sqrt(double(n)) * amps(n - 1);
    residual += std::norm(v);
  }
  CHECK(std::sqrt(residual) < 1e-8);
}

TEST_CASE("coherent state amplitudes") {
  const auto c = coherent_fock(2.0, 64);
  CHECK(std::abs(c.amps()(0)) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(c.amps()(3).real() == doctest::Approx(std::exp(-2.0) * 8.0 / std::sqrt(6.0)).epsilon(1e-12));
  CHECK_THROWS_AS(coherent_fock(7.0, 32), TruncationError);
}

TEST_CASE("fixed-H evolution is unitary and matches Gaussian moments") {
  for (double g : {0.5, 0.92}) {
    const auto p = make_params(1.0, g);
    const auto h = build_hamiltonian(p, 512);
    const auto psi0 = coherent_fock(1.0, 512);
    for (double t : {0.7, 3.1, revival_time(p, 1)}) {
      const auto psi = evolve_fixed(h, psi0, t);
      CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
      const auto m = moments_fock(psi);
      const auto s = propagate(p, coherent_gaussian(1.0), t);
      const auto gm = quadrature_moments(s);
      CHECK(m.mean_p == doctest::Approx(s.mean(1)).epsilon(1e-9).scale(1.0));
      CHECK(m.mean_x == doctest::Approx(s.mean(0)).epsilon(1e-9).scale(1.0));
      CHECK(m.var_p == doctest::Approx(s.cov(1, 1)).epsilon(1e-9));
      CHECK(m.var_x == doctest::Approx(s.cov(0, 0)).epsilon(1e-9));
      CHECK(m.cov_xp == doctest::Approx(s.cov(0, 1)).epsilon(1e-9).scale(1.0));
      CHECK(m.var_x2 == doctest::Approx(gm.var_x2).epsilon(1e-8));
    }
  }
}

TEST_CASE("vacuum moments") {
  const auto m = moments_fock(FockVector::number_state(0, 16));
  CHECK(m.var_x == doctest::Approx(0.5));
  CHECK(m.var_p == doctest::Approx(0.5));
  CHECK(m.var_x2 == doctest::Approx(0.5));
  CHECK(m.mean_n == 0.0);
}

TEST_CASE("ramp schedule") {
  const auto s = RampSchedule::reaching(0.98, 100.0);
  CHECK(s.rate() == doctest::Approx(0.0492468529477013917).epsilon(1e-13));
  CHECK(s.g_final() == doctest::Approx(0.98).epsilon(1e-14));
  CHECK(s.g_at(0.0) == 0.0);
  const auto w = RampSchedule::with_rate(s.rate(), 105.0);
  CHECK(w.g_final() == doctest::Approx(0.9818090).epsilon(1e-6));
  CHECK_THROWS_AS(RampSchedule::reaching(1.0, 10.0), GaplessPhase);
  CHECK_THROWS_AS(RampSchedule::reaching(0.5, 0.0), InvalidArgument);
}

TEST_CASE("ramp follows the instantaneous ground state") {
  const auto p = make_params(1.0, 0.0);
  const auto s = RampSchedule::reaching(0.9, 30.0);
  const auto result = evolve_ramp(s, p, FockVector::number_state(0, 128), 0.01);
  CHECK(result.norm_drift < 1e-8);
  const auto gs = build_hamiltonian(make_params(1.0, 0.9), 128).ground_state();
  CHECK(fidelity(result.state, gs) > 0.999);
  CHECK(result.steps >= 3000);
}

TEST_CASE("ramp rejects too-tight norm tolerance") {
  const auto p = make_params(1.0, 0.0);
  RampOptions opts;
  opts.norm_tolerance = 1e-30;
  CHECK_THROWS_AS(evolve_ramp(RampSchedule::reaching(0.9, 5.0), p, FockVector::number_state(0, 64), 0.05, opts),
                  NormDrift);
}

TEST_CASE("ramp subdivides steps past the stability limit") {
  const auto p = make_params(1.0, 0.0);
  const auto r = evolve_ramp(RampSchedule::reaching(0.5, 1.0), p, FockVector::number_state(0, 64), 0.5);
  CHECK(r.step * 64.0 <= 2.5 * 1.5);
  CHECK(r.step < 0.5);
}

TEST_CASE("overlap QFI of the ground state") {
  for (double g : {0.5, 0.9}) {
    const auto p = make_params(1.0, g);
    const StateFamily fam = [&](double omega) {
      const auto q = with_omega_fixed_drive(p, omega);
      return build_hamiltonian(q, 256).ground_state();
    };
    const auto est = qfi_overlap(fam, 1.0, 1e-4);
    CHECK(est.value == doctest::Approx(qfi_adiabatic_omega(p)).epsilon(1e-3));
    CHECK(est.relative_spread < 0.01);
  }
}

TEST_CASE("overlap QFI flags an oversized step") {
  const StateFamily fam = [](double omega) {
    const auto q = with_omega_fixed_drive(make_params(1.0, 0.9), omega);
    return build_hamiltonian(q, 256).ground_state();
  };
  CHECK_THROWS_AS(qfi_overlap(fam, 1.0, 0.05), StepTooLarge);
}

TEST_CASE("cutoff doubling") {
  std::size_t calls = 0;
  const auto choice = converge_cutoff(
      [&](std::size_t n) {
        ++calls;
        const auto c = coherent_fock(3.0, n);
        return std::vector<double>{moments_fock(c).mean_n};
      },
      1e-9);
  // The larger cutoff of the first agreeing pair is reported.
  CHECK(choice.cutoff == 128);
  CHECK(choice.observables[0] == doctest::Approx(9.0).epsilon(1e-9));

  const auto grown = converge_cutoff(
      [](std::size_t n) {
        const auto c = coherent_fock(9.0, n);
        return std::vector<double>{moments_fock(c).mean_n};
      },
      1e-9);
  CHECK(grown.cutoff >= 128);

  CHECK_THROWS_AS(converge_cutoff([](std::size_t n) { return std::vector<double>{double(n)}; }, 1e-9, 64, 256),
                  TruncationError);
}
