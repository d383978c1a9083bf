#include <doctest.h>

#include <cmath>

#include "critsense/errors.hpp"
#include "critsense/model.hpp"

using namespace critsense;

TEST_CASE("make_params stores omega and g, derives epsilon") {
  const auto p0 = make_params(1.0, 0.0);
  CHECK(p0.omega() == 1.0);
  CHECK(p0.epsilon() == 0.0);

  const auto p = make_params(1.0, 0.96);
  CHECK(p.g() == 0.96);
  CHECK(p.epsilon() == doctest::Approx(0.96));

  const auto q = make_params(2.0, 0.5);
  CHECK(q.epsilon() == 1.0);
  CHECK(q.epsilon() / q.omega() == q.g());
}

TEST_CASE("make_params rejects bad input") {
  CHECK_THROWS_AS(make_params(0.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(make_params(-1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(make_params(1.0, std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(make_params(1.0, INFINITY), InvalidArgument);
  // Negative g is a valid parameter set; the gapped operations refuse it.
  CHECK_THROWS_AS(spectrum(make_params(1.0, -0.1)), InvalidArgument);
}

TEST_CASE("spectrum values") {
  const auto s0 = spectrum(make_params(1.0, 0.0));
  CHECK(s0.excitation_energy == 1.0);
  CHECK(s0.ground_energy == 0.0);
  CHECK(s0.squeeze == 0.0);

  const auto s = spectrum(make_params(1.0, 0.6));
  CHECK(s.excitation_energy == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s.ground_energy == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(s.squeeze == doctest::Approx(-0.346573590279972654).epsilon(1e-14));

  const auto c = spectrum(make_params(1.0, 0.96));
  CHECK(c.excitation_energy == doctest::Approx(0.28).epsilon(1e-14));
  CHECK(c.squeeze == doctest::Approx(-0.972955074527656653).epsilon(1e-14));
}

TEST_CASE("gapless phase is a typed error") {
  CHECK_THROWS_AS(spectrum(make_params(1.0, 1.0)), GaplessPhase);
  CHECK_THROWS_AS(spectrum(make_params(1.0, 1.5)), GaplessPhase);
  CHECK_THROWS_AS(eigen_energy(make_params(1.0, 1.0), 0), GaplessPhase);
}

TEST_CASE("eigen energies") {
  CHECK(eigen_energy(make_params(1.0, 0.0), 3) == 3.0);
  CHECK(eigen_energy(make_params(1.0, 0.6), 0) == doctest::Approx(-0.1));
  CHECK(eigen_energy(make_params(1.0, 0.6), 2) == doctest::Approx(1.5));
}

TEST_CASE("ladder spacing is the excitation energy") {
  for (double g = 0.0; g < 1.0; g += 0.0371) {
    for (double omega : {0.3, 1.0, 7.0}) {
      const auto p = make_params(omega, g);
      const double gap = spectrum(p).excitation_energy;
      for (std::size_t n = 0; n < 40; ++n) {
        const double step = eigen_energy(p, n + 1) - eigen_energy(p, n);
        CHECK(std::abs(step - gap) <= 1e-12 * std::max(1.0, eigen_energy(p, n + 1)));
      }
    }
  }
}

TEST_CASE("gap closes and squeezing diverges at the critical point") {
  CHECK(spectrum(make_params(1.0, 1.0 - 1e-8)).excitation_energy < 2e-4);
  double previous = squeeze_parameter(0.0);
  CHECK(previous == 0.0);
  for (int i = 1; i < 1000; ++i) {
    const double r = squeeze_parameter(i / 1000.0);
    CHECK(r < previous);
    CHECK(r <= 0.0);
    previous = r;
  }
}
