#include "critsense/fock.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "critsense/errors.hpp"

namespace critsense {

namespace {

constexpr std::size_t kMinCutoff = 4;

// sqrt((n+1)(n+2)): matrix element <n+2| a^dag^2 |n>.
double pair_element(std::size_t n) {
  return std::sqrt(static_cast<double>(n + 1) * static_cast<double>(n + 2));
}

void require_cutoff(std::size_t cutoff) {
  if (cutoff < kMinCutoff) {
    throw InvalidArgument(fmt::format("cutoff must be at least {}, got {}", kMinCutoff, cutoff));
  }
}

}  // namespace

double tail_mass(const CVector& amps) {
  const auto n = static_cast<std::size_t>(amps.size());
  const std::size_t start = n - n / 10;
  double mass = 0.0;
  for (std::size_t i = start; i < n; ++i) mass += std::norm(amps(static_cast<Eigen::Index>(i)));
  return mass;
}

FockVector::FockVector(CVector amps, double tail_tolerance, double norm_tolerance)
    : amps_(std::move(amps)) {
  if (amps_.size() == 0) throw InvalidArgument("Fock vector must be non-empty");
  const double tail = tail_mass(amps_);
  if (!(tail < tail_tolerance)) {
    throw TruncationError(fmt::format(
        "tail mass {:.3e} in the top tenth of a {}-level basis exceeds {:.1e}; raise the cutoff",
        tail, amps_.size(), tail_tolerance));
  }
  const double drift = std::abs(amps_.squaredNorm() - 1.0);
  if (!(drift <= norm_tolerance)) {
    throw InvalidArgument(fmt::format("Fock vector not normalized: | |psi|^2 - 1 | = {:.3e}", drift));
  }
}

FockVector FockVector::number_state(std::size_t n, std::size_t cutoff) {
  if (n >= cutoff) throw InvalidArgument("number state outside the truncated basis");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(cutoff));
  v(static_cast<Eigen::Index>(n)) = 1.0;
  return FockVector(std::move(v), 2.0);
}

FockHamiltonian::FockHamiltonian(const ModelParams& params, std::size_t cutoff)
    : params_(params), cutoff_(cutoff) {
  require_cutoff(cutoff);
  const double w = params.omega();
  const double half_eps = 0.5 * params.epsilon();

  // Parity is conserved: levels 2j and 2j+1 form two tridiagonal blocks.
  auto solve = [&](std::size_t first) {
    const std::size_t size = (cutoff - first + 1) / 2;
    Eigen::VectorXd diag(size);
    Eigen::VectorXd sub(size > 0 ? size - 1 : 0);
    for (std::size_t j = 0; j < size; ++j) {
      const std::size_t n = first + 2 * j;
      diag(static_cast<Eigen::Index>(j)) = w * static_cast<double>(n);
      if (j + 1 < size) sub(static_cast<Eigen::Index>(j)) = half_eps * pair_element(n);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::InvalidArgument, "tridiagonal eigensolver failed to converge");
    }
    return Block{solver.eigenvalues(), solver.eigenvectors()};
  };
  even_ = solve(0);
  odd_ = solve(1);
}

Eigen::MatrixXd FockHamiltonian::dense() const {
  const auto n = static_cast<Eigen::Index>(cutoff_);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const double half_eps = 0.5 * params_.epsilon();
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = params_.omega() * static_cast<double>(i);
    if (i + 2 < n) {
      h(i, i + 2) = half_eps * pair_element(static_cast<std::size_t>(i));
      h(i + 2, i) = h(i, i + 2);
    }
  }
  return h;
}

std::vector<double> FockHamiltonian::eigenvalues() const {
  std::vector<double> out(even_.values.data(), even_.values.data() + even_.values.size());
  out.insert(out.end(), odd_.values.data(), odd_.values.data() + odd_.values.size());
  std::sort(out.begin(), out.end());
  return out;
}

FockVector FockHamiltonian::ground_state(double tail_tolerance) const {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(cutoff_));
  const Eigen::VectorXd lowest = even_.vectors.col(0);
  const double sign = lowest(0) < 0.0 ? -1.0 : 1.0;
  for (Eigen::Index j = 0; j < lowest.size(); ++j) v(2 * j) = sign * lowest(j);
  return FockVector(std::move(v), tail_tolerance);
}

CVector FockHamiltonian::apply_propagator(const CVector& psi, double t) const {
  if (static_cast<std::size_t>(psi.size()) != cutoff_) {
    throw InvalidArgument(fmt::format("state has {} levels, Hamiltonian has {}", psi.size(), cutoff_));
  }
  CVector out(psi.size());
  auto run = [&](const Block& b, Eigen::Index first) {
    const Eigen::Index size = b.values.size();
    CVector local(size);
    for (Eigen::Index j = 0; j < size; ++j) local(j) = psi(first + 2 * j);
    CVector coeff = b.vectors.transpose().cast<Complex>() * local;
    for (Eigen::Index j = 0; j < size; ++j) coeff(j) *= std::polar(1.0, -b.values(j) * t);
    local = b.vectors.cast<Complex>() * coeff;
    for (Eigen::Index j = 0; j < size; ++j) out(first + 2 * j) = local(j);
  };
  run(even_, 0);
  run(odd_, 1);
  return out;
}

FockHamiltonian build_hamiltonian(const ModelParams& params, std::size_t cutoff) {
  return FockHamiltonian(params, cutoff);
}

FockVector coherent_fock(double alpha, std::size_t cutoff, double tail_tolerance) {
  require_cutoff(cutoff);
  if (!std::isfinite(alpha)) throw InvalidArgument("coherent amplitude must be finite");
  CVector v(static_cast<Eigen::Index>(cutoff));
  v(0) = std::exp(-0.5 * alpha * alpha);
  for (Eigen::Index n = 1; n < v.size(); ++n) {
    v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  // The truncated norm deficit is at most the discarded tail.
  if (!(tail_mass(v) < tail_tolerance) || !(1.0 - v.squaredNorm() < tail_tolerance)) {
    throw TruncationError(fmt::format(
        "coherent state alpha={} does not fit in {} levels (tail {:.3e})", alpha, cutoff,
        std::max(tail_mass(v), 1.0 - v.squaredNorm())));
  }
  return FockVector(std::move(v), tail_tolerance, std::max(1e-9, tail_tolerance));
}

FockVector squeezed_vacuum_fock(double r, std::size_t cutoff, double tail_tolerance) {
  require_cutoff(cutoff);
  if (!std::isfinite(r)) throw InvalidArgument("squeeze parameter must be finite");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(cutoff));
  const double th = std::tanh(r);
  v(0) = 1.0;
  for (Eigen::Index n = 0; n + 2 < v.size(); n += 2) {
    v(n + 2) = v(n) * th * std::sqrt(static_cast<double>(n + 1) / static_cast<double>(n + 2));
  }
  v /= v.norm();
  return FockVector(std::move(v), tail_tolerance);
}

FockVector evolve_fixed(const FockHamiltonian& h, const FockVector& psi0, double t,
                        double tail_tolerance) {
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
  return FockVector(h.apply_propagator(psi0.amps(), t), tail_tolerance);
}

RampSchedule RampSchedule::reaching(double g_final, double duration) {
  if (!std::isfinite(g_final) || g_final < 0.0 || g_final >= 1.0) {
    throw GaplessPhase(fmt::format("ramp target must lie in [0, 1), got {}", g_final));
  }
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw InvalidArgument(fmt::format("ramp duration must be positive, got {}", duration));
  }
  const double kt = g_final / std::sqrt((1.0 - g_final) * (1.0 + g_final));
  return RampSchedule(kt / duration, duration);
}

RampSchedule RampSchedule::with_rate(double k, double duration) {
  if (!std::isfinite(k) || k < 0.0) throw InvalidArgument("ramp rate must be nonnegative");
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw InvalidArgument(fmt::format("ramp duration must be positive, got {}", duration));
  }
  return RampSchedule(k, duration);
}

double RampSchedule::g_at(double t) const {
  const double kt = rate_ * t;
  return kt / std::hypot(1.0, kt);
}

namespace {

// y = -i H y_in with H = omega n + (eps/2)(a^dag^2 + a^2), pentadiagonal.
void apply_generator(double omega, double eps, const std::vector<double>& pairs,
                     const CVector& in, CVector& out) {
  const Eigen::Index n = in.size();
  const Complex minus_i(0.0, -1.0);
  const double half = 0.5 * eps;
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex acc = omega * static_cast<double>(k) * in(k);
    if (k + 2 < n) acc += half * pairs[static_cast<std::size_t>(k)] * in(k + 2);
    if (k >= 2) acc += half * pairs[static_cast<std::size_t>(k - 2)] * in(k - 2);
    out(k) = minus_i * acc;
  }
}

}  // namespace

RampResult evolve_ramp(const RampSchedule& schedule, const ModelParams& base,
                       const FockVector& psi0, double dt, const RampOptions& options) {
  if (!std::isfinite(dt) || dt <= 0.0) throw InvalidArgument("time step must be positive");
  const double omega = base.omega();
  const double scale = options.drive_scale.value_or(omega);
  const std::size_t cutoff = psi0.cutoff();
  require_cutoff(cutoff);

  std::vector<double> pairs(cutoff);
  for (std::size_t k = 0; k < cutoff; ++k) pairs[k] = pair_element(k);

  // Gershgorin bound at the largest drive (g(t) is increasing).
  const double eps_max = std::abs(scale * schedule.g_final());
  double bound = 0.0;
  for (std::size_t k = 0; k < cutoff; ++k) {
    double row = omega * static_cast<double>(k);
    if (k + 2 < cutoff) row += 0.5 * eps_max * pairs[k];
    if (k >= 2) row += 0.5 * eps_max * pairs[k - 2];
    bound = std::max(bound, row);
  }
  double h = std::min(dt, options.stability_limit / bound);
  auto steps = static_cast<std::size_t>(std::ceil(schedule.duration() / h - 1e-9));
  if (options.fixed_steps) {
    steps = *options.fixed_steps;
    if (steps == 0) throw InvalidArgument("fixed step count must be positive");
    if (schedule.duration() / static_cast<double>(steps) * bound > options.stability_limit) {
      throw StepTooLarge(fmt::format("{} steps put dt*||H|| above {}", steps, options.stability_limit));
    }
  }
  h = schedule.duration() / static_cast<double>(steps);

  const auto dim = static_cast<Eigen::Index>(cutoff);
  CVector y = psi0.amps();
  CVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  auto eps_at = [&](double t) { return scale * schedule.g_at(t); };

  for (std::size_t s = 0; s < steps; ++s) {
    const double t = h * static_cast<double>(s);
    const double e_mid = eps_at(t + 0.5 * h);
    apply_generator(omega, eps_at(t), pairs, y, k1);
    tmp = y + (0.5 * h) * k1;
    apply_generator(omega, e_mid, pairs, tmp, k2);
    tmp = y + (0.5 * h) * k2;
    apply_generator(omega, e_mid, pairs, tmp, k3);
    tmp = y + h * k3;
    apply_generator(omega, eps_at(t + h), pairs, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const double drift = std::abs(y.squaredNorm() - 1.0);
  if (!(drift < options.norm_tolerance)) {
    throw NormDrift(fmt::format("norm drifted by {:.3e} over {} RK4 steps (dt = {})", drift, steps, h));
  }
  return RampResult{FockVector(std::move(y), options.tail_tolerance, options.norm_tolerance), drift,
                    steps, h};
}

double fidelity(const FockVector& psi, const FockVector& phi, bool pad) {
  const Eigen::Index a = psi.amps().size();
  const Eigen::Index b = phi.amps().size();
  if (a != b && !pad) {
    throw InvalidArgument(fmt::format("cutoff mismatch: {} vs {}", a, b));
  }
  const Eigen::Index n = std::min(a, b);
  const Complex overlap = psi.amps().head(n).dot(phi.amps().head(n));
  return std::norm(overlap);
}

QfiEstimate qfi_overlap(const StateFamily& family, double theta, double delta) {
  if (!std::isfinite(delta) || delta <= 0.0) throw InvalidArgument("QFI step must be positive");
  auto estimate = [&](double d) {
    const double f = fidelity(family(theta - d), family(theta + d));
    const double gap = std::max(0.0, (1.0 - f) / (1.0 + std::sqrt(f)));  // 1 - |<.|.>|
    return 8.0 * gap / (4.0 * d * d);
  };
  const double coarse = estimate(delta);
  const double fine = estimate(0.5 * delta);
  // Overlaps are resolved to ~1e-15; below that both estimates are noise.
  const double noise = 8.0 * 1e-14 / (delta * delta);
  const double spread = std::abs(coarse - fine);
  const double scale = std::max(std::abs(fine), noise);
  if (spread > 0.01 * std::abs(fine) + noise) {
    throw StepTooLarge(fmt::format(
        "QFI estimates at delta={} ({}) and delta/2 ({}) differ by more than 1%", delta, coarse, fine));
  }
  return QfiEstimate{coarse, fine, (4.0 * fine - coarse) / 3.0, spread / scale};
}

FockMoments moments_fock(const FockVector& psi) {
  const CVector& v = psi.amps();
  const Eigen::Index n = v.size();
  Complex a1 = 0.0;
  Complex a2 = 0.0;
  double num = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    num += static_cast<double>(k) * std::norm(v(k));
    if (k + 1 < n) a1 += std::conj(v(k)) * std::sqrt(static_cast<double>(k + 1)) * v(k + 1);
    if (k + 2 < n) a2 += std::conj(v(k)) * pair_element(static_cast<std::size_t>(k)) * v(k + 2);
  }

  // X applied twice on a basis padded by two levels is exact.
  auto apply_x = [](const CVector& in) {
    CVector out = CVector::Zero(in.size());
    for (Eigen::Index k = 0; k < in.size(); ++k) {
      Complex acc = 0.0;
      if (k + 1 < in.size()) acc += std::sqrt(static_cast<double>(k + 1)) * in(k + 1);
      if (k >= 1) acc += std::sqrt(static_cast<double>(k)) * in(k - 1);
      out(k) = acc / std::sqrt(2.0);
    }
    return out;
  };
  CVector padded = CVector::Zero(n + 2);
  padded.head(n) = v;
  const CVector x1 = apply_x(padded);
  const CVector x2 = apply_x(x1);
  const double mean_x2 = x1.squaredNorm();
  const double mean_x4 = x2.squaredNorm();

  FockMoments m{};
  m.mean_x = std::sqrt(2.0) * a1.real();
  m.mean_p = std::sqrt(2.0) * a1.imag();
  m.mean_n = num;
  m.var_x = a2.real() + num + 0.5 - m.mean_x * m.mean_x;
  m.var_p = -a2.real() + num + 0.5 - m.mean_p * m.mean_p;
  m.cov_xp = a2.imag() - m.mean_x * m.mean_p;
  m.var_x2 = mean_x4 - mean_x2 * mean_x2;
  return m;
}

CutoffChoice converge_cutoff(const std::function<std::vector<double>(std::size_t)>& observe,
                             double tol, std::size_t start, std::size_t max_cutoff) {
  require_cutoff(start);
  auto agree = [tol](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double scale = std::max(1.0, std::abs(b[i]));
      if (!(std::abs(a[i] - b[i]) <= tol * scale)) return false;
    }
    return true;
  };

  std::optional<std::vector<double>> previous;
  for (std::size_t n = start; n <= max_cutoff; n *= 2) {
    std::vector<double> current;
    try {
      current = observe(n);
    } catch (const TruncationError&) {
      previous.reset();
      continue;
    }
    if (previous && agree(*previous, current)) return CutoffChoice{n, std::move(current)};
    previous = std::move(current);
  }
  throw TruncationError(fmt::format("observables did not converge to {:.1e} below cutoff {}", tol, max_cutoff));
}

}  // namespace critsense
