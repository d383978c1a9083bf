#include <doctest.h>

#include <cmath>
#include <numbers>

#include "critsense/errors.hpp"
#include "critsense/gaussian.hpp"
#include "critsense/metrology.hpp"
#include "critsense/model.hpp"

using namespace critsense;
using std::numbers::pi;

namespace {

DynamicProbe probe(double g, double alpha = 1.0, double omega = 1.0) {
  return DynamicProbe(make_params(omega, g), alpha);
}

}  // namespace

TEST_CASE("probe construction") {
  CHECK(probe(0.5).lambda() == doctest::Approx(3.0));
  CHECK(probe(0.5, 1.0).var_x2_initial() == doctest::Approx(4.5));
  CHECK(probe(0.5).frequency() == doctest::Approx(std::sqrt(0.75)));
  CHECK_THROWS_AS(probe(1.0), GaplessPhase);
  CHECK_THROWS_AS(probe(-0.2), InvalidArgument);
  CHECK_THROWS_AS(probe(0.5, -1.0), InvalidArgument);
}

TEST_CASE("dynamic QFI values") {
  CHECK(qfi_dynamic(probe(0.5), 0.0) == 0.0);
  CHECK(qfi_dynamic(probe(0.96), 11.2199737628206901) ==
        doctest::Approx(354059.469107956902).epsilon(1e-12));
}

TEST_CASE("dynamic QFI is continuous across the small-argument series") {
  const auto p = probe(0.9);
  const double omega_ = std::sqrt(p.lambda());
  for (double x : {0.5e-3, 0.999e-3, 1.001e-3, 2e-3}) {
    const double t = x / omega_;
    // Direct evaluation in long double as an independent reference.
    const long double xl = x;
    const long double bracket = (std::sin(xl) - xl) / std::pow(static_cast<long double>(omega_), 3);
    const double g = 0.9;
    const long double ref = 16.0L * std::pow(1.0L + g, 2) * bracket * bracket * 4.5L;
    CHECK(qfi_dynamic(p, t) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-6));
  }
}

TEST_CASE("dynamic QFI is nonnegative and scales with the probe energy") {
  for (double g = 0.0; g < 0.99; g += 0.07) {
    for (double t = 0.0; t < 40.0; t += 0.37) {
      const double q1 = qfi_dynamic(probe(g, 1.0), t);
      const double q3 = qfi_dynamic(probe(g, 3.0), t);
      CHECK(q1 >= 0.0);
      CHECK(q3 == doctest::Approx(q1 * 36.5 / 4.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("quadrature mean and variance") {
  const auto p = probe(0.5);
  const double t = 0.5 * pi / p.frequency();
  CHECK(mean_p(p, t) == doctest::Approx(-2.44948974278317810).epsilon(1e-13));
  CHECK(var_p(p, t) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(mean_p(p, 0.0) == 0.0);
  CHECK(var_p(p, 0.0) == 0.5);
}

TEST_CASE("closed forms agree with the Gaussian propagation") {
  for (double g : {0.1, 0.5, 0.92}) {
    const auto p = probe(g, 2.0);
    for (double t = 0.0; t < 20.0; t += 0.83) {
      const auto s = propagate(p.params(), coherent_gaussian(2.0), t);
      CHECK(mean_p(p, t) == doctest::Approx(s.mean(1)).epsilon(1e-11));
      CHECK(var_p(p, t) == doctest::Approx(s.cov(1, 1)).epsilon(1e-11));
    }
  }
}

TEST_CASE("susceptibility values") {
  CHECK(susceptibility(probe(0.96), 11.2199737628206901) ==
        doctest::Approx(-380.818537556431393).epsilon(1e-11));
  const auto half = probe(0.5);
  CHECK(susceptibility(half, revival_time(half.params(), 2)) ==
        doctest::Approx(10.2603986412949128).epsilon(1e-12));
  CHECK(susceptibility(half, 1.3) == doctest::Approx(-2.15663939403766103).epsilon(1e-12));
}

TEST_CASE("susceptibility matches a finite difference of the mean") {
  const double h = 1e-6;
  for (double g : {0.2, 0.6, 0.95}) {
    for (double t = 0.1; t < 30.0; t += 1.7) {
      const double fd = (mean_p(probe(g + h, 1.5), t) - mean_p(probe(g - h, 1.5), t)) / (2 * h);
      const double chi = susceptibility(probe(g, 1.5), t);
      CHECK(chi == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("revival times and peaks") {
  const auto p = make_params(1.0, 0.96);
  CHECK(revival_time(p, 1) == doctest::Approx(11.2199737628206901).epsilon(1e-14));
  CHECK_THROWS_AS(revival_time(p, 0), InvalidArgument);
  const auto times = revival_times(p, 4);
  REQUIRE(times.size() == 4);
  CHECK(times[3].n == 4);
  CHECK(times[3].time == doctest::Approx(4 * times[0].time));
  CHECK(inverted_variance_peak(p, 1.0, 1) == doctest::Approx(290045.517093238294).epsilon(1e-12));
  const DynamicProbe pr(p, 1.0);
  for (std::size_t n = 1; n <= 5; ++n) {
    const double tn = revival_time(p, n);
    CHECK(inverted_variance(pr, tn) == doctest::Approx(inverted_variance_peak(p, 1.0, n)).epsilon(1e-9));
    CHECK(inverted_variance(pr, tn) / qfi_dynamic(pr, tn) == doctest::Approx(revival_ratio(0.96, 1.0)).epsilon(1e-9));
  }
  CHECK(revival_ratio(0.96, 1.0) == doctest::Approx(0.8192).epsilon(1e-14));
}

TEST_CASE("adiabatic QFI and SNR") {
  CHECK(qfi_adiabatic_omega(make_params(1.0, 0.5)) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(qfi_adiabatic_omega(make_params(1.0, 0.98)) == doctest::Approx(306.218753188450167).epsilon(1e-13));
  CHECK(qfi_adiabatic_omega(make_params(2.0, 0.5)) == doctest::Approx(2.0 / 36.0).epsilon(1e-14));
  CHECK(snr_omega(make_params(2.0, 0.5)) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(qfi_adiabatic_omega(make_params(1.0, 0.0)) == 0.0);
}

TEST_CASE("adiabatic QFI matches a finite difference of the Gaussian ground state") {
  // Ground state is a squeezed vacuum with r(g); vary omega at fixed epsilon.
  const double h = 1e-5;
  for (double g : {0.1, 0.5, 0.9, 0.98}) {
    const auto p = make_params(1.0, g);
    auto cov_at = [&](double omega) {
      const auto q = with_omega_fixed_drive(p, omega);
      return squeezed_vacuum_gaussian(squeeze_parameter(q.g())).cov;
    };
    const Mat2 dcov = (cov_at(1.0 + h) - cov_at(1.0 - h)) / (2 * h);
    const double qfi = pure_gaussian_qfi(squeezed_vacuum_gaussian(squeeze_parameter(g)), Vec2::Zero(), dcov);
    CHECK(qfi == doctest::Approx(qfi_adiabatic_omega(p)).epsilon(1e-5));
  }
}

TEST_CASE("homodyne weight") {
  CHECK(homodyne_weight(-0.346573590279972654, pi / 4) == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(homodyne_weight(-0.7, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(homodyne_weight(-0.7, pi / 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(homodyne_weight(0.0, 0.3) == doctest::Approx(std::pow(std::cos(0.6), 2)));
  for (double phi = 0.0; phi < pi; phi += 0.01) CHECK(homodyne_weight(-1.2, phi) <= 1.0 + 1e-15);
}

TEST_CASE("homodyne Fisher saturates the QFI on the axes") {
  for (double g = 0.05; g < 0.99; g += 0.05) {
    const auto p = make_params(1.0, g);
    CHECK(homodyne_fisher(p, 0.0) == doctest::Approx(qfi_adiabatic_omega(p)).epsilon(1e-12));
    CHECK(homodyne_fisher(p, pi / 2) == doctest::Approx(qfi_adiabatic_omega(p)).epsilon(1e-12));
  }
}

TEST_CASE("homodyne maximum agrees with a dense angle grid") {
  for (double g : {0.3, 0.8, 0.97}) {
    const auto p = make_params(1.0, g);
    double best = 0.0;
    for (int i = 0; i <= 3600; ++i) {
      best = std::max(best, homodyne_fisher(p, pi * i / 3600.0));
    }
    const auto opt = homodyne_fisher_max(p);
    CHECK(opt.fisher == doctest::Approx(best).epsilon(1e-12));
    CHECK(best <= qfi_adiabatic_omega(p) * (1 + 1e-12));
  }
}
