#include "critsense/critsense.h"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include "critsense/commands.hpp"
#include "critsense/errors.hpp"
#include "critsense/fock.hpp"
#include "critsense/gaussian.hpp"
#include "critsense/metrology.hpp"
#include "critsense/model.hpp"

struct cs_params {
  critsense::ModelParams value;
};
struct cs_gaussian {
  critsense::GaussianState value;
};
struct cs_probe {
  critsense::DynamicProbe value;
};
struct cs_fock {
  critsense::FockVector value;
};

namespace {

thread_local std::string last_error;

cs_status status_of(critsense::ErrorKind kind) {
  using critsense::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument: return CS_ERR_INVALID_ARGUMENT;
    case ErrorKind::GaplessPhase: return CS_ERR_GAPLESS_PHASE;
    case ErrorKind::Truncation: return CS_ERR_TRUNCATION;
    case ErrorKind::NormDrift: return CS_ERR_NORM_DRIFT;
    case ErrorKind::StepTooLarge: return CS_ERR_STEP_TOO_LARGE;
    case ErrorKind::Fit: return CS_ERR_FIT;
    case ErrorKind::Io: return CS_ERR_IO;
    case ErrorKind::Verification: return CS_ERR_VERIFICATION;
  }
  return CS_ERR_INTERNAL;
}

template <class F>
cs_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return CS_OK;
  } catch (const critsense::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CS_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw critsense::InvalidArgument(std::string(what) + " must not be NULL");
}

critsense::Engine engine_of(cs_engine e) {
  switch (e) {
    case CS_ENGINE_ANALYTIC: return critsense::Engine::Analytic;
    case CS_ENGINE_GAUSSIAN: return critsense::Engine::Gaussian;
    case CS_ENGINE_FOCK: return critsense::Engine::Fock;
    case CS_ENGINE_ALL: return critsense::Engine::All;
  }
  throw critsense::InvalidArgument("unknown engine");
}

cs_engine engine_to_c(critsense::Engine e) {
  switch (e) {
    case critsense::Engine::Analytic: return CS_ENGINE_ANALYTIC;
    case critsense::Engine::Gaussian: return CS_ENGINE_GAUSSIAN;
    case critsense::Engine::Fock: return CS_ENGINE_FOCK;
    case critsense::Engine::All: return CS_ENGINE_ALL;
  }
  return CS_ENGINE_ANALYTIC;
}

std::vector<double> list(const double* data, size_t count, const char* what) {
  if (count == 0) throw critsense::InvalidArgument(std::string(what) + " list is empty");
  require(data, what);
  return std::vector<double>(data, data + count);
}

// CSV plus the optional plot stub; removes both if the second write fails.
void emit(const critsense::Table& table, const char* out_path, int plot, std::string_view x,
          const std::vector<std::string>& y, std::string_view series) {
  require(out_path, "out_path");
  const std::filesystem::path path(out_path);
  critsense::write_text_file(path, critsense::format_csv(table));
  if (plot) {
    std::filesystem::path gp = path;
    gp += ".gp";
    try {
      critsense::write_text_file(gp, critsense::plot_script(path, table, x, y, series));
    } catch (...) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
      throw;
    }
  }
}

std::filesystem::path sibling(const std::filesystem::path& path, std::string_view suffix) {
  std::filesystem::path out = path.parent_path() / path.stem();
  out += suffix;
  return out;
}

// Static storage for the default list pointers.
const double kFig1G[] = {0.92, 0.94, 0.96};
const double kFig1Alpha[] = {1.0, 2.0, 3.0};
const double kRampTimes[] = {100.0, 105.0};

}  // namespace

extern "C" {

const char* cs_last_error(void) { return last_error.c_str(); }

const char* cs_status_name(cs_status status) {
  switch (status) {
    case CS_OK: return "ok";
    case CS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CS_ERR_GAPLESS_PHASE: return "gapless_phase";
    case CS_ERR_TRUNCATION: return "truncation";
    case CS_ERR_NORM_DRIFT: return "norm_drift";
    case CS_ERR_STEP_TOO_LARGE: return "step_too_large";
    case CS_ERR_FIT: return "fit";
    case CS_ERR_IO: return "io";
    case CS_ERR_VERIFICATION: return "verification_failed";
    case CS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int cs_status_exit_code(cs_status status) {
  switch (status) {
    case CS_OK: return 0;
    case CS_ERR_INVALID_ARGUMENT:
    case CS_ERR_GAPLESS_PHASE:
    case CS_ERR_FIT: return 2;
    case CS_ERR_IO: return 3;
    default: return 1;
  }
}

cs_status cs_params_create(double omega, double g, cs_params** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_params{critsense::make_params(omega, g)};
  });
}

void cs_params_destroy(cs_params* params) { delete params; }

cs_status cs_params_get(const cs_params* params, double* omega, double* epsilon, double* g) {
  return guarded([&] {
    require(params, "params");
    if (omega) *omega = params->value.omega();
    if (epsilon) *epsilon = params->value.epsilon();
    if (g) *g = params->value.g();
  });
}

cs_status cs_spectrum(const cs_params* params, double* excitation_energy, double* ground_energy, double* squeeze) {
  return guarded([&] {
    require(params, "params");
    const auto s = critsense::spectrum(params->value);
    if (excitation_energy) *excitation_energy = s.excitation_energy;
    if (ground_energy) *ground_energy = s.ground_energy;
    if (squeeze) *squeeze = s.squeeze;
  });
}

cs_status cs_eigen_energy(const cs_params* params, size_t n, double* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = critsense::eigen_energy(params->value, n);
  });
}

cs_status cs_gaussian_coherent(double alpha, cs_gaussian** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_gaussian{critsense::coherent_gaussian(alpha)};
  });
}

cs_status cs_gaussian_squeezed_vacuum(double r, cs_gaussian** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_gaussian{critsense::squeezed_vacuum_gaussian(r)};
  });
}

void cs_gaussian_destroy(cs_gaussian* state) { delete state; }

cs_status cs_gaussian_get(const cs_gaussian* state, double mean[2], double cov[4]) {
  return guarded([&] {
    require(state, "state");
    if (mean) {
      mean[0] = state->value.mean(0);
      mean[1] = state->value.mean(1);
    }
    if (cov) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) cov[2 * i + j] = state->value.cov(i, j);
      }
    }
  });
}

cs_status cs_gaussian_propagate(const cs_params* params, const cs_gaussian* state, double t, cs_gaussian** out) {
  return guarded([&] {
    require(params, "params");
    require(state, "state");
    require(out, "out");
    *out = new cs_gaussian{critsense::propagate(params->value, state->value, t)};
  });
}

cs_status cs_gaussian_moments(const cs_gaussian* state, cs_quadrature_moments* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    const auto m = critsense::quadrature_moments(state->value);
    *out = cs_quadrature_moments{m.mean_x, m.mean_p, m.var_x, m.var_p, m.var_x2, m.var_p2};
  });
}

cs_status cs_gaussian_rotated_moment(const cs_gaussian* state, double phi, double* mean_sq, double* var_of_sq) {
  return guarded([&] {
    require(state, "state");
    const auto m = critsense::rotated_quadrature_moment(state->value, phi);
    if (mean_sq) *mean_sq = m.mean_sq;
    if (var_of_sq) *var_of_sq = m.var_of_sq;
  });
}

cs_status cs_probe_create(const cs_params* params, double alpha, cs_probe** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = new cs_probe{critsense::DynamicProbe(params->value, alpha)};
  });
}

void cs_probe_destroy(cs_probe* probe) { delete probe; }

#define CS_PROBE_FN(name, fn)                                  \
  cs_status name(const cs_probe* probe, double t, double* out) { \
    return guarded([&] {                                       \
      require(probe, "probe");                                 \
      require(out, "out");                                     \
      *out = critsense::fn(probe->value, t);                   \
    });                                                        \
  }

CS_PROBE_FN(cs_qfi_dynamic, qfi_dynamic)
CS_PROBE_FN(cs_mean_p, mean_p)
CS_PROBE_FN(cs_var_p, var_p)
CS_PROBE_FN(cs_susceptibility, susceptibility)
CS_PROBE_FN(cs_inverted_variance, inverted_variance)
#undef CS_PROBE_FN

cs_status cs_revival_time(const cs_params* params, size_t n, double* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = critsense::revival_time(params->value, n);
  });
}

cs_status cs_qfi_adiabatic_omega(const cs_params* params, double* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = critsense::qfi_adiabatic_omega(params->value);
  });
}

cs_status cs_snr_omega(const cs_params* params, double* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = critsense::snr_omega(params->value);
  });
}

cs_status cs_homodyne_fisher(const cs_params* params, double phi, double* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = critsense::homodyne_fisher(params->value, phi);
  });
}

cs_status cs_homodyne_fisher_max(const cs_params* params, double* fisher, double* phi) {
  return guarded([&] {
    require(params, "params");
    const auto best = critsense::homodyne_fisher_max(params->value);
    if (fisher) *fisher = best.fisher;
    if (phi) *phi = best.phi;
  });
}

cs_status cs_fock_coherent(double alpha, size_t cutoff, cs_fock** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_fock{critsense::coherent_fock(alpha, cutoff)};
  });
}

cs_status cs_fock_squeezed_vacuum(double r, size_t cutoff, cs_fock** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_fock{critsense::squeezed_vacuum_fock(r, cutoff)};
  });
}

void cs_fock_destroy(cs_fock* state) { delete state; }

size_t cs_fock_cutoff(const cs_fock* state) { return state ? state->value.cutoff() : 0; }

cs_status cs_fock_amplitudes(const cs_fock* state, double* re, double* im, size_t len) {
  return guarded([&] {
    require(state, "state");
    const auto& a = state->value.amps();
    const size_t n = std::min(len, state->value.cutoff());
    for (size_t i = 0; i < n; ++i) {
      if (re) re[i] = a(static_cast<Eigen::Index>(i)).real();
      if (im) im[i] = a(static_cast<Eigen::Index>(i)).imag();
    }
  });
}

cs_status cs_fock_evolve_fixed(const cs_params* params, const cs_fock* psi, double t, cs_fock** out) {
  return guarded([&] {
    require(params, "params");
    require(psi, "psi");
    require(out, "out");
    const critsense::FockHamiltonian h(params->value, psi->value.cutoff());
    *out = new cs_fock{critsense::evolve_fixed(h, psi->value, t)};
  });
}

cs_status cs_fock_evolve_ramp(double g_final, double duration, double omega, const cs_fock* psi, double dt,
                              cs_fock** out) {
  return guarded([&] {
    require(psi, "psi");
    require(out, "out");
    const auto schedule = critsense::RampSchedule::reaching(g_final, duration);
    auto result = critsense::evolve_ramp(schedule, critsense::make_params(omega, 0.0), psi->value, dt);
    *out = new cs_fock{std::move(result.state)};
  });
}

cs_status cs_fock_fidelity(const cs_fock* a, const cs_fock* b, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = critsense::fidelity(a->value, b->value);
  });
}

cs_status cs_fock_moments_get(const cs_fock* state, cs_fock_moments* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    const auto m = critsense::moments_fock(state->value);
    *out = cs_fock_moments{m.mean_x, m.mean_p, m.var_x, m.var_p, m.cov_xp, m.var_x2, m.mean_n};
  });
}

cs_status cs_fock_eigenvalues(const cs_params* params, size_t cutoff, double* out, size_t count) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    const auto values = critsense::FockHamiltonian(params->value, cutoff).eigenvalues();
    if (count > values.size()) throw critsense::InvalidArgument("more eigenvalues requested than the cutoff holds");
    std::copy_n(values.begin(), count, out);
  });
}

void cs_fig1_defaults(cs_fig1_options* out) {
  if (!out) return;
  const critsense::Fig1Options d;
  *out = cs_fig1_options{kFig1G, 3, kFig1Alpha, 3, d.omega, d.t_max, d.points, engine_to_c(d.engine), d.threads};
}

void cs_fig2_defaults(cs_fig2_options* out) {
  if (!out) return;
  const critsense::Fig2Options d;
  *out = cs_fig2_options{kFig1G, 3, d.alpha, d.omega, d.n_max, d.points_per_period, engine_to_c(d.engine), d.threads};
}

void cs_fig3_defaults(cs_fig3_options* out) {
  if (!out) return;
  const critsense::Fig3Options d;
  *out = cs_fig3_options{d.g_min, d.g_max, d.points, d.alpha, d.omega, engine_to_c(d.engine), d.threads};
}

void cs_fig4_defaults(cs_fig4_options* out) {
  if (!out) return;
  const critsense::Fig4Options d;
  *out = cs_fig4_options{d.g_min, d.g_max, d.points, d.omega, engine_to_c(d.engine), d.threads};
}

void cs_adiabatic_defaults(cs_adiabatic_options* out) {
  if (!out) return;
  const critsense::AdiabaticOptions d;
  *out = cs_adiabatic_options{d.g_final, kRampTimes, 2, d.omega, d.dt, d.cutoff, CS_RATE_SHARED,
                              d.state_snr ? 1 : 0, d.threads};
}

cs_status cs_run_fig1(const cs_fig1_options* o, const char* out_path, int plot_script) {
  return guarded([&] {
    require(o, "options");
    critsense::Fig1Options opts;
    opts.g = list(o->g, o->g_count, "g");
    opts.alpha = list(o->alpha, o->alpha_count, "alpha");
    opts.omega = o->omega;
    opts.t_max = o->t_max;
    opts.points = o->points;
    opts.engine = engine_of(o->engine);
    opts.threads = o->threads;
    emit(critsense::run_fig1(opts), out_path, plot_script, "t", {"qfi"}, "g");
  });
}

cs_status cs_run_fig2(const cs_fig2_options* o, const char* out_path, int plot_script, cs_fit_result* fits,
                      size_t fit_capacity, size_t* fit_count) {
  return guarded([&] {
    require(o, "options");
    require(out_path, "out_path");
    critsense::Fig2Options opts;
    opts.g = list(o->g, o->g_count, "g");
    opts.alpha = o->alpha;
    opts.omega = o->omega;
    opts.n_max = o->n_max;
    opts.points_per_period = o->points_per_period;
    opts.engine = engine_of(o->engine);
    opts.threads = o->threads;
    const auto result = critsense::run_fig2(opts);

    const std::filesystem::path path(out_path);
    const auto maxima_path = sibling(path, "_maxima.csv");
    const auto fit_path = sibling(path, "_fit.csv");
    try {
      emit(result.table, out_path, plot_script, "t", {"inverted_variance"}, "g");
      critsense::write_text_file(maxima_path, critsense::format_csv(result.maxima));
      critsense::write_text_file(fit_path, critsense::format_csv(result.fits));
    } catch (...) {
      std::error_code ec;
      for (const auto& p : {path, maxima_path, fit_path}) std::filesystem::remove(p, ec);
      std::filesystem::remove(std::filesystem::path(path) += ".gp", ec);
      throw;
    }
    if (fit_count) *fit_count = result.series.size();
    if (fits) {
      for (size_t i = 0; i < std::min(fit_capacity, result.series.size()); ++i) {
        const auto& s = result.series[i];
        fits[i] = cs_fit_result{s.g, s.fit.amplitude, s.fit.exponent, s.fit.r_squared, s.fit.points_used};
      }
    }
  });
}

cs_status cs_run_fig3(const cs_fig3_options* o, const char* out_path, int plot_script) {
  return guarded([&] {
    require(o, "options");
    critsense::Fig3Options opts;
    opts.g_min = o->g_min;
    opts.g_max = o->g_max;
    opts.points = o->points;
    opts.alpha = o->alpha;
    opts.omega = o->omega;
    opts.engine = engine_of(o->engine);
    opts.threads = o->threads;
    emit(critsense::run_fig3(opts), out_path, plot_script, "g", {"inverted_variance", "qfi"}, "");
  });
}

cs_status cs_run_fig4(const cs_fig4_options* o, const char* out_path, int plot_script) {
  return guarded([&] {
    require(o, "options");
    critsense::Fig4Options opts;
    opts.g_min = o->g_min;
    opts.g_max = o->g_max;
    opts.points = o->points;
    opts.omega = o->omega;
    opts.engine = engine_of(o->engine);
    opts.threads = o->threads;
    emit(critsense::run_fig4(opts), out_path, plot_script, "g", {"snr", "fisher_ratio"}, "");
  });
}

cs_status cs_run_adiabatic(const cs_adiabatic_options* o, const char* out_path, cs_adiabatic_run* runs,
                           size_t run_capacity, size_t* run_count) {
  return guarded([&] {
    require(o, "options");
    critsense::AdiabaticOptions opts;
    opts.g_final = o->g_final;
    opts.ramp_times = list(o->ramp_times, o->ramp_count, "ramp_times");
    opts.omega = o->omega;
    opts.dt = o->dt;
    opts.cutoff = o->cutoff;
    opts.rate_mode = o->rate_mode == CS_RATE_PER_RAMP ? critsense::RateMode::PerRamp : critsense::RateMode::Shared;
    opts.state_snr = o->state_snr != 0;
    opts.threads = o->threads;
    const auto result = critsense::run_adiabatic(opts);
    if (out_path) critsense::write_text_file(out_path, critsense::format_csv(critsense::adiabatic_table(result)));
    if (run_count) *run_count = result.size();
    if (runs) {
      for (size_t i = 0; i < std::min(run_capacity, result.size()); ++i) {
        const auto& r = result[i];
        runs[i] = cs_adiabatic_run{r.ramp_time, r.rate, r.g_end, r.cutoff, r.steps, r.step, r.fidelity,
                                   r.fidelity_half_step, r.integrator_error, r.norm_drift, r.snr_state,
                                   r.snr_ground, r.fidelity_reaching_g_final};
      }
    }
  });
}

cs_status cs_run_verify(cs_verify_level level, unsigned threads, cs_text_sink sink, void* user) {
  bool passed = false;
  const cs_status s = guarded([&] {
    const auto report = critsense::run_verify(
        level == CS_VERIFY_FULL ? critsense::VerifyLevel::Full : critsense::VerifyLevel::Fast, threads);
    if (sink) sink(report.format().c_str(), user);
    passed = report.passed();
  });
  if (s != CS_OK) return s;
  if (!passed) {
    last_error = "one or more verification checks failed";
    return CS_ERR_VERIFICATION;
  }
  return CS_OK;
}

}  // extern "C"
