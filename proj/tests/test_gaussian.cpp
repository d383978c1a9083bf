#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "critsense/errors.hpp"
#include "critsense/gaussian.hpp"
#include "critsense/model.hpp"

using namespace critsense;
using std::numbers::pi;
using std::numbers::sqrt2;

TEST_CASE("coherent and squeezed constructors") {
  const auto vac = coherent_gaussian(0.0);
  CHECK(vac.mean.norm() == 0.0);
  CHECK(vac.cov(0, 0) == 0.5);
  CHECK(vac.cov(1, 1) == 0.5);
  CHECK(vac.cov(0, 1) == 0.0);
  CHECK(coherent_gaussian(1.0).mean(0) == doctest::Approx(1.41421356237));
  CHECK(coherent_gaussian(3.0).mean(0) == doctest::Approx(4.24264068712));
  CHECK_THROWS_AS(coherent_gaussian(-1.0), InvalidArgument);
  CHECK_THROWS_AS(coherent_gaussian(NAN), InvalidArgument);

  const auto sq = squeezed_vacuum_gaussian(-0.346573590279972654);
  CHECK(sq.cov(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sq.cov(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(squeezed_vacuum_gaussian(2.3).cov.determinant() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(squeezed_vacuum_gaussian(INFINITY), InvalidArgument);
}

TEST_CASE("free rotation returns after one period") {
  const auto p = make_params(1.0, 0.0);
  const auto s = propagate(p, coherent_gaussian(1.0), 2.0 * pi);
  CHECK(s.mean(0) == doctest::Approx(sqrt2).epsilon(1e-12));
  CHECK(std::abs(s.mean(1)) < 1e-12);
  CHECK(s.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quarter period at g = 0.5") {
  const auto p = make_params(1.0, 0.5);
  const double t = 0.5 * pi / std::sqrt(0.75);
  const auto s = propagate(p, coherent_gaussian(1.0), t);
  CHECK(s.mean(1) == doctest::Approx(-2.44948974278317810).epsilon(1e-12));
  CHECK(s.cov(1, 1) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("first revival at g = 0.96 flips the mean") {
  const auto p = make_params(1.0, 0.96);
  const auto s = propagate(p, coherent_gaussian(1.0), 11.2199737628206901);
  CHECK(std::abs(s.mean(1)) < 1e-12);
  CHECK(s.cov(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.mean(0) == doctest::Approx(-sqrt2).epsilon(1e-12));
}

TEST_CASE("flow matches a Taylor-series matrix exponential in every regime") {
  // Independent route: exp(A t) summed term by term.
  for (double g : {0.0, 0.3, 0.96, 1.0, 1.4}) {
    const auto p = make_params(1.3, g);
    Mat2 a;
    a << 0.0, p.omega() - p.epsilon(), -(p.omega() + p.epsilon()), 0.0;
    for (double t : {0.1, 0.9, 2.5}) {
      Mat2 term = Mat2::Identity();
      Mat2 sum = Mat2::Identity();
      for (int k = 1; k < 80; ++k) {
        term = term * a * t / static_cast<double>(k);
        sum += term;
      }
      const Mat2 flow = flow_matrix(p, t);
      CHECK((flow - sum).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, sum.norm()));
    }
  }
}

TEST_CASE("propagation preserves purity and composes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> g_dist(0.0, 1.5), t_dist(0.0, 6.0), a_dist(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = make_params(1.0, g_dist(rng));
    const auto s0 = coherent_gaussian(a_dist(rng));
    const double t1 = t_dist(rng), t2 = t_dist(rng);
    const auto once = propagate(p, s0, t1 + t2);
    const auto twice = propagate(p, propagate(p, s0, t1), t2);
    const double scale = std::max(1.0, once.cov.norm());
    CHECK(std::abs(once.cov.determinant() - 0.25) <= 1e-9 * scale * scale);
    CHECK((once.cov - once.cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK((once.cov - twice.cov).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK((once.mean - twice.mean).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, once.mean.norm()));
    CHECK(once.cov(0, 0) * once.cov(1, 1) >= 0.25 - 1e-9);
  }
}

TEST_CASE("g = 1 uses the linear limit") {
  const auto p = make_params(1.0, 1.0);
  const Mat2 flow = flow_matrix(p, 3.0);
  CHECK(flow(0, 0) == 1.0);
  CHECK(flow(0, 1) == 0.0);
  CHECK(flow(1, 0) == doctest::Approx(-6.0));
  CHECK(flow(1, 1) == 1.0);
  CHECK_THROWS_AS(flow_matrix(p, NAN), InvalidArgument);
}

TEST_CASE("Gaussian fourth moments") {
  CHECK(quadrature_moments(coherent_gaussian(1.0)).var_x2 == doctest::Approx(4.5));
  CHECK(quadrature_moments(coherent_gaussian(0.0)).var_x2 == doctest::Approx(0.5));
  const double r = -0.7;
  CHECK(quadrature_moments(squeezed_vacuum_gaussian(r)).var_x2 == doctest::Approx(0.5 * std::exp(4 * r)));
}

TEST_CASE("rotated quadrature moments") {
  const double r = -0.7;
  const auto sq = squeezed_vacuum_gaussian(r);
  CHECK(rotated_quadrature_moment(sq, 0.0).mean_sq == doctest::Approx(0.5 * std::exp(2 * r)));
  CHECK(rotated_quadrature_moment(sq, 0.5 * pi).mean_sq == doctest::Approx(0.5 * std::exp(-2 * r)));
  for (double phi : {0.0, 0.4, 1.1, 2.9}) {
    CHECK(rotated_quadrature_moment(coherent_gaussian(0.0), phi).mean_sq == doctest::Approx(0.5));
  }
}

TEST_CASE("pure Gaussian QFI of displacement and squeezing") {
  // Displacement in alpha: QFI 4; squeezing in r: QFI 2.
  const double h = 1e-6;
  const auto c = coherent_gaussian(1.0);
  CHECK(pure_gaussian_qfi(c, (coherent_gaussian(1.0 + h).mean - coherent_gaussian(1.0 - h).mean) / (2 * h),
                          Mat2::Zero()) == doctest::Approx(4.0));
  const auto s = squeezed_vacuum_gaussian(0.3);
  const Mat2 dcov = (squeezed_vacuum_gaussian(0.3 + h).cov - squeezed_vacuum_gaussian(0.3 - h).cov) / (2 * h);
  CHECK(pure_gaussian_qfi(s, Vec2::Zero(), dcov) == doctest::Approx(2.0).epsilon(1e-8));
}
