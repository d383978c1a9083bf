#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include "critsense/model.hpp"

namespace critsense {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Single-mode Gaussian state in quadratures X = (a + a^dag)/sqrt2,
/// P = i(a^dag - a)/sqrt2. cov(Q,R) = <QR + RQ>/2 - <Q><R>; vacuum is I/2.
struct GaussianState {
  Vec2 mean = Vec2::Zero();
  Mat2 cov = 0.5 * Mat2::Identity();

  double purity_determinant() const { return cov.determinant(); }
};

GaussianState coherent_gaussian(double alpha);
GaussianState squeezed_vacuum_gaussian(double r);

/// Symplectic flow exp(A t) with A = [[0, w - e], [-(w + e), 0]].
/// Closed form in each regime: trigonometric (g < 1), linear (g == 1),
/// hyperbolic (g > 1).
Mat2 flow_matrix(const ModelParams& p, double t);

GaussianState propagate(const ModelParams& p, const GaussianState& s,
                        double t);

struct QuadratureMoments {
  double mean_x;
  double mean_p;
  double var_x;
  double var_p;
  double var_x2;  // Var(X^2)
  double var_p2;  // Var(P^2)
};

QuadratureMoments quadrature_moments(const GaussianState& s);

struct RotatedMoment {
  double mean_sq;    // <X_phi^2>
  double var_of_sq;  // Var(X_phi^2)
};

/// X_phi = cos(phi) X + sin(phi) P.
RotatedMoment rotated_quadrature_moment(const GaussianState& s, double phi);

/// QFI of a pure Gaussian family from the state and its parameter
/// derivative: dmu^T cov^-1 dmu + (1/4) tr[(cov^-1 dcov)^2].
double pure_gaussian_qfi(const GaussianState& s, const Vec2& dmean,
                         const Mat2& dcov);

}  // namespace critsense
