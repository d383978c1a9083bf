/*
 * C interface to the critsense library: a parametrically driven bosonic
 * mode H = omega a^dag a + (epsilon/2)(a^dag^2 + a^2) with g = epsilon/omega.
 *
 * Every function returns a cs_status. On failure the thread-local message
 * from cs_last_error() describes the cause. Handles are opaque and owned by
 * the caller; release them with the matching *_destroy function (NULL is
 * accepted).
 */
#ifndef CRITSENSE_H
#define CRITSENSE_H

#include <stddef.h>

#if defined(_WIN32)
#define CS_API __declspec(dllexport)
#else
#define CS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_ERR_INVALID_ARGUMENT = 1,
  CS_ERR_GAPLESS_PHASE = 2,
  CS_ERR_TRUNCATION = 3,
  CS_ERR_NORM_DRIFT = 4,
  CS_ERR_STEP_TOO_LARGE = 5,
  CS_ERR_FIT = 6,
  CS_ERR_IO = 7,
  CS_ERR_VERIFICATION = 8,
  CS_ERR_INTERNAL = 9
} cs_status;

CS_API const char* cs_last_error(void);
/* Stable snake_case identifier, e.g. "gapless_phase". */
CS_API const char* cs_status_name(cs_status status);
/* 0 success, 1 verification/numerical failure, 2 domain error, 3 I/O. */
CS_API int cs_status_exit_code(cs_status status);

/* ---- model ---------------------------------------------------------- */

typedef struct cs_params cs_params;

CS_API cs_status cs_params_create(double omega, double g, cs_params** out);
CS_API void cs_params_destroy(cs_params* params);
CS_API cs_status cs_params_get(const cs_params* params, double* omega, double* epsilon, double* g);
CS_API cs_status cs_spectrum(const cs_params* params, double* excitation_energy, double* ground_energy,
                             double* squeeze);
CS_API cs_status cs_eigen_energy(const cs_params* params, size_t n, double* out);

/* ---- Gaussian phase-space engine ------------------------------------ */

typedef struct cs_gaussian cs_gaussian;

typedef struct cs_quadrature_moments {
  double mean_x, mean_p, var_x, var_p, var_x2, var_p2;
} cs_quadrature_moments;

CS_API cs_status cs_gaussian_coherent(double alpha, cs_gaussian** out);
CS_API cs_status cs_gaussian_squeezed_vacuum(double r, cs_gaussian** out);
CS_API void cs_gaussian_destroy(cs_gaussian* state);
/* mean[2] = (<X>, <P>); cov[4] row-major. */
CS_API cs_status cs_gaussian_get(const cs_gaussian* state, double mean[2], double cov[4]);
CS_API cs_status cs_gaussian_propagate(const cs_params* params, const cs_gaussian* state, double t,
                                       cs_gaussian** out);
CS_API cs_status cs_gaussian_moments(const cs_gaussian* state, cs_quadrature_moments* out);
CS_API cs_status cs_gaussian_rotated_moment(const cs_gaussian* state, double phi, double* mean_sq,
                                            double* var_of_sq);

/* ---- closed-form metrology ------------------------------------------ */

typedef struct cs_probe cs_probe;

CS_API cs_status cs_probe_create(const cs_params* params, double alpha, cs_probe** out);
CS_API void cs_probe_destroy(cs_probe* probe);
CS_API cs_status cs_qfi_dynamic(const cs_probe* probe, double t, double* out);
CS_API cs_status cs_mean_p(const cs_probe* probe, double t, double* out);
CS_API cs_status cs_var_p(const cs_probe* probe, double t, double* out);
CS_API cs_status cs_susceptibility(const cs_probe* probe, double t, double* out);
CS_API cs_status cs_inverted_variance(const cs_probe* probe, double t, double* out);
CS_API cs_status cs_revival_time(const cs_params* params, size_t n, double* out);
CS_API cs_status cs_qfi_adiabatic_omega(const cs_params* params, double* out);
CS_API cs_status cs_snr_omega(const cs_params* params, double* out);
CS_API cs_status cs_homodyne_fisher(const cs_params* params, double phi, double* out);
CS_API cs_status cs_homodyne_fisher_max(const cs_params* params, double* fisher, double* phi);

/* ---- truncated Fock-space oracle ------------------------------------ */

typedef struct cs_fock cs_fock;

typedef struct cs_fock_moments {
  double mean_x, mean_p, var_x, var_p, cov_xp, var_x2, mean_n;
} cs_fock_moments;

CS_API cs_status cs_fock_coherent(double alpha, size_t cutoff, cs_fock** out);
CS_API cs_status cs_fock_squeezed_vacuum(double r, size_t cutoff, cs_fock** out);
CS_API void cs_fock_destroy(cs_fock* state);
CS_API size_t cs_fock_cutoff(const cs_fock* state);
/* Copies min(len, cutoff) amplitudes. */
CS_API cs_status cs_fock_amplitudes(const cs_fock* state, double* re, double* im, size_t len);
CS_API cs_status cs_fock_evolve_fixed(const cs_params* params, const cs_fock* psi, double t, cs_fock** out);
/* Ramp g(t) = k t / sqrt(1 + (k t)^2) from psi, k chosen so g(duration) = g_final. */
CS_API cs_status cs_fock_evolve_ramp(double g_final, double duration, double omega, const cs_fock* psi,
                                     double dt, cs_fock** out);
CS_API cs_status cs_fock_fidelity(const cs_fock* a, const cs_fock* b, double* out);
CS_API cs_status cs_fock_moments_get(const cs_fock* state, cs_fock_moments* out);
/* Lowest `count` eigenvalues of the truncated Hamiltonian, ascending. */
CS_API cs_status cs_fock_eigenvalues(const cs_params* params, size_t cutoff, double* out, size_t count);

/* ---- command runners ------------------------------------------------ */

typedef enum cs_engine { CS_ENGINE_ANALYTIC = 0, CS_ENGINE_GAUSSIAN, CS_ENGINE_FOCK, CS_ENGINE_ALL } cs_engine;

typedef struct cs_fig1_options {
  const double* g;
  size_t g_count;
  const double* alpha;
  size_t alpha_count;
  double omega;
  double t_max; /* <= 0: two revival periods per series */
  size_t points;
  cs_engine engine;
  unsigned threads;
} cs_fig1_options;

typedef struct cs_fig2_options {
  const double* g;
  size_t g_count;
  double alpha;
  double omega;
  size_t n_max;
  size_t points_per_period;
  cs_engine engine;
  unsigned threads;
} cs_fig2_options;

typedef struct cs_fit_result {
  double g;
  double amplitude;
  double exponent;
  double r_squared;
  size_t points_used;
} cs_fit_result;

typedef struct cs_fig3_options {
  double g_min, g_max;
  size_t points;
  double alpha;
  double omega;
  cs_engine engine;
  unsigned threads;
} cs_fig3_options;

typedef struct cs_fig4_options {
  double g_min, g_max;
  size_t points;
  double omega;
  cs_engine engine;
  unsigned threads;
} cs_fig4_options;

typedef enum cs_rate_mode { CS_RATE_SHARED = 0, CS_RATE_PER_RAMP = 1 } cs_rate_mode;

typedef struct cs_adiabatic_options {
  double g_final;
  const double* ramp_times;
  size_t ramp_count;
  double omega;
  double dt;
  size_t cutoff; /* 0: automatic */
  cs_rate_mode rate_mode;
  int state_snr;
  unsigned threads;
} cs_adiabatic_options;

typedef struct cs_adiabatic_run {
  double ramp_time, rate, g_end;
  size_t cutoff, steps;
  double step, fidelity, fidelity_half_step, integrator_error, norm_drift;
  double snr_state, snr_ground, fidelity_reaching_g_final;
} cs_adiabatic_run;

typedef enum cs_verify_level { CS_VERIFY_FAST = 0, CS_VERIFY_FULL = 1 } cs_verify_level;

typedef void (*cs_text_sink)(const char* text, void* user);

/* Fill option structs with the built-in defaults. List pointers refer to
 * static storage owned by the library. */
CS_API void cs_fig1_defaults(cs_fig1_options* out);
CS_API void cs_fig2_defaults(cs_fig2_options* out);
CS_API void cs_fig3_defaults(cs_fig3_options* out);
CS_API void cs_fig4_defaults(cs_fig4_options* out);
CS_API void cs_adiabatic_defaults(cs_adiabatic_options* out);

/* Each runner writes a CSV at out_path; plot_script != 0 also writes a
 * gnuplot stub next to it (<out_path>.gp). On failure no output remains. */
CS_API cs_status cs_run_fig1(const cs_fig1_options* options, const char* out_path, int plot_script);
/* Also writes <stem>_maxima.csv and <stem>_fit.csv; fits[] receives up to
 * fit_capacity results, *fit_count the number of series. */
CS_API cs_status cs_run_fig2(const cs_fig2_options* options, const char* out_path, int plot_script,
                             cs_fit_result* fits, size_t fit_capacity, size_t* fit_count);
CS_API cs_status cs_run_fig3(const cs_fig3_options* options, const char* out_path, int plot_script);
CS_API cs_status cs_run_fig4(const cs_fig4_options* options, const char* out_path, int plot_script);
CS_API cs_status cs_run_adiabatic(const cs_adiabatic_options* options, const char* out_path,
                                  cs_adiabatic_run* runs, size_t run_capacity, size_t* run_count);
/* Streams the text report to sink; CS_ERR_VERIFICATION if any check fails. */
CS_API cs_status cs_run_verify(cs_verify_level level, unsigned threads, cs_text_sink sink, void* user);

#ifdef __cplusplus
}
#endif

#endif /* CRITSENSE_H */
