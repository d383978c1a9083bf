#include "critsense/gaussian.hpp"

#include <cmath>

#include <Eigen/LU>
#include <fmt/format.h>

#include "critsense/errors.hpp"

namespace critsense {

GaussianState coherent_gaussian(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidArgument(fmt::format("coherent amplitude must be a nonnegative real, got {}", alpha));
  }
  GaussianState s;
  s.mean = Vec2(std::sqrt(2.0) * alpha, 0.0);
  return s;
}

GaussianState squeezed_vacuum_gaussian(double r) {
  if (!std::isfinite(r)) throw InvalidArgument("squeeze parameter must be finite");
  GaussianState s;
  s.cov = Mat2::Zero();
  s.cov(0, 0) = 0.5 * std::exp(2.0 * r);
  s.cov(1, 1) = 0.5 * std::exp(-2.0 * r);
  return s;
}

Mat2 flow_matrix(const ModelParams& p, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
  const double w = p.omega();
  const double e = p.epsilon();
  Mat2 a;
  a << 0.0, w - e, -(w + e), 0.0;

  // A^2 = -(w - e)(w + e) I, so exp(At) = c(t) I + s(t) A.
  const double k2 = (w - e) * (w + e);
  double c = 1.0;
  double s = t;
  if (k2 > 0.0) {
    const double freq = std::sqrt(k2);
    c = std::cos(freq * t);
    s = std::sin(freq * t) / freq;
  } else if (k2 < 0.0) {
    const double rate = std::sqrt(-k2);
    c = std::cosh(rate * t);
    s = std::sinh(rate * t) / rate;
  }
  return c * Mat2::Identity() + s * a;
}

GaussianState propagate(const ModelParams& p, const GaussianState& state, double t) {
  const Mat2 flow = flow_matrix(p, t);
  GaussianState out;
  out.mean = flow * state.mean;
  out.cov = flow * state.cov * flow.transpose();
  // Re-symmetrize against rounding in the triple product.
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

namespace {

double square_variance(double mean, double var) {
  return 2.0 * var * var + 4.0 * mean * mean * var;
}

}  // namespace

QuadratureMoments quadrature_moments(const GaussianState& s) {
  QuadratureMoments m{};
  m.mean_x = s.mean(0);
  m.mean_p = s.mean(1);
  m.var_x = s.cov(0, 0);
  m.var_p = s.cov(1, 1);
  m.var_x2 = square_variance(m.mean_x, m.var_x);
  m.var_p2 = square_variance(m.mean_p, m.var_p);
  return m;
}

RotatedMoment rotated_quadrature_moment(const GaussianState& s, double phi) {
  const Vec2 u(std::cos(phi), std::sin(phi));
  const double mean = u.dot(s.mean);
  const double var = u.dot(s.cov * u);
  return RotatedMoment{var + mean * mean, square_variance(mean, var)};
}

double pure_gaussian_qfi(const GaussianState& s, const Vec2& dmean, const Mat2& dcov) {
  const Mat2 inv = s.cov.inverse();
  const Mat2 m = inv * dcov;
  return dmean.dot(inv * dmean) + 0.25 * (m * m).trace();
}

}  // namespace critsense
