// critsense: reproduce the sensing figures, the adiabatic ramp runs and the
// cross-engine verification suite from the command line.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critsense/critsense.h"

namespace {

struct Globals {
  double omega = 1.0;
  std::string out;
  std::string format = "csv";
  cs_engine engine = CS_ENGINE_ANALYTIC;
  unsigned threads = 1;
};

int fail(cs_status status) {
  std::fprintf(stderr, "critsense: error[%s]: %s\n", cs_status_name(status), cs_last_error());
  return cs_status_exit_code(status);
}

std::string out_or(const Globals& g, const char* fallback) { return g.out.empty() ? fallback : g.out; }

bool wants_plot(const Globals& g) { return g.format == "csv+gnuplot"; }

void print_sink(const char* text, void*) { std::fputs(text, stdout); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical quantum sensing with a parametrically driven bosonic mode"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");

  Globals globals;
  const std::map<std::string, cs_engine> engines{{"analytic", CS_ENGINE_ANALYTIC},
                                                 {"gaussian", CS_ENGINE_GAUSSIAN},
                                                 {"fock", CS_ENGINE_FOCK},
                                                 {"all", CS_ENGINE_ALL}};
  app.add_option("--omega", globals.omega, "Detuning omega (sets the time unit)")->capture_default_str();
  app.add_option("--out", globals.out, "Output path (default: <command>.csv)");
  app.add_option("--format", globals.format, "Output format")
      ->check(CLI::IsMember({"csv", "csv+gnuplot"}))
      ->capture_default_str();
  app.add_option("--engine", globals.engine, "Engine: analytic, gaussian, fock or all")
      ->transform(CLI::CheckedTransformer(engines, CLI::ignore_case));
  app.add_option("--threads", globals.threads, "Worker threads for sweeps")->capture_default_str();

  // fig1
  cs_fig1_options fig1;
  cs_fig1_defaults(&fig1);
  std::vector<double> fig1_g(fig1.g, fig1.g + fig1.g_count);
  std::vector<double> fig1_alpha(fig1.alpha, fig1.alpha + fig1.alpha_count);
  auto* c1 = app.add_subcommand("fig1", "Dynamic QFI versus time (columns g,alpha,t,qfi)");
  c1->add_option("--g", fig1_g, "Comma-separated g values")->delimiter(',')->capture_default_str();
  c1->add_option("--alpha", fig1_alpha, "Comma-separated coherent amplitudes")->delimiter(',')->capture_default_str();
  c1->add_option("--t-max", fig1.t_max, "Final time; <= 0 uses two revival periods per g")->capture_default_str();
  c1->add_option("--points", fig1.points, "Time samples per series")->capture_default_str();

  // fig2
  cs_fig2_options fig2;
  cs_fig2_defaults(&fig2);
  std::vector<double> fig2_g(fig2.g, fig2.g + fig2.g_count);
  auto* c2 = app.add_subcommand("fig2", "Inverted variance versus time with maxima and power-law fit");
  c2->add_option("--g", fig2_g, "Comma-separated g values")->delimiter(',')->capture_default_str();
  c2->add_option("--alpha", fig2.alpha, "Coherent amplitude")->capture_default_str();
  c2->add_option("--n-max", fig2.n_max, "Number of revival windows")->capture_default_str();
  c2->add_option("--points-per-period", fig2.points_per_period, "Samples per revival period")->capture_default_str();

  // fig3
  cs_fig3_options fig3;
  cs_fig3_defaults(&fig3);
  auto* c3 = app.add_subcommand("fig3", "Inverted variance and QFI versus g at the first revival");
  c3->add_option("--g-min", fig3.g_min)->capture_default_str();
  c3->add_option("--g-max", fig3.g_max)->capture_default_str();
  c3->add_option("--points", fig3.points)->capture_default_str();
  c3->add_option("--alpha", fig3.alpha)->capture_default_str();

  // fig4
  cs_fig4_options fig4;
  cs_fig4_defaults(&fig4);
  auto* c4 = app.add_subcommand("fig4", "Adiabatic signal-to-noise bound and homodyne Fisher ratio versus g");
  c4->add_option("--g-min", fig4.g_min)->capture_default_str();
  c4->add_option("--g-max", fig4.g_max)->capture_default_str();
  c4->add_option("--points", fig4.points)->capture_default_str();

  // adiabatic
  cs_adiabatic_options adia;
  cs_adiabatic_defaults(&adia);
  std::vector<double> ramp_times(adia.ramp_times, adia.ramp_times + adia.ramp_count);
  std::string rate_mode = "shared";
  bool skip_snr = false;
  auto* ca = app.add_subcommand("adiabatic", "Ramp g to g_final and report fidelity to the squeezed vacuum");
  ca->add_option("--g-final", adia.g_final)->capture_default_str();
  ca->add_option("--ramp-times", ramp_times, "Comma-separated ramp durations in units of 1/omega")
      ->delimiter(',')
      ->capture_default_str();
  ca->add_option("--dt", adia.dt, "Integrator step in units of 1/omega")->capture_default_str();
  ca->add_option("--cutoff", adia.cutoff, "Fock cutoff; 0 selects it by doubling")->capture_default_str();
  ca->add_option("--rate-mode", rate_mode,
                 "shared: k fixed by the first ramp time; per-ramp: every ramp ends at g_final")
      ->check(CLI::IsMember({"shared", "per-ramp"}))
      ->capture_default_str();
  ca->add_flag("--no-snr", skip_snr, "Skip the output-state QFI (saves four ramps per entry)");

  // verify
  std::string level = "fast";
  auto* cv = app.add_subcommand("verify", "Run the cross-engine invariant suite");
  cv->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const int plot = wants_plot(globals) ? 1 : 0;
  cs_status status = CS_OK;

  if (*c1) {
    fig1.g = fig1_g.data();
    fig1.g_count = fig1_g.size();
    fig1.alpha = fig1_alpha.data();
    fig1.alpha_count = fig1_alpha.size();
    fig1.omega = globals.omega;
    fig1.engine = globals.engine;
    fig1.threads = globals.threads;
    status = cs_run_fig1(&fig1, out_or(globals, "fig1.csv").c_str(), plot);
  } else if (*c2) {
    fig2.g = fig2_g.data();
    fig2.g_count = fig2_g.size();
    fig2.omega = globals.omega;
    fig2.engine = globals.engine;
    fig2.threads = globals.threads;
    std::vector<cs_fit_result> fits(fig2_g.size());
    size_t count = 0;
    status = cs_run_fig2(&fig2, out_or(globals, "fig2.csv").c_str(), plot, fits.data(), fits.size(), &count);
    if (status == CS_OK) {
      std::printf("%-8s %-14s %-10s %-10s\n", "g", "C", "D", "R^2");
      for (size_t i = 0; i < count; ++i) {
        std::printf("%-8.4g %-14.6g %-10.6f %-10.8f\n", fits[i].g, fits[i].amplitude, fits[i].exponent,
                    fits[i].r_squared);
      }
    }
  } else if (*c3) {
    fig3.omega = globals.omega;
    fig3.engine = globals.engine;
    fig3.threads = globals.threads;
    status = cs_run_fig3(&fig3, out_or(globals, "fig3.csv").c_str(), plot);
  } else if (*c4) {
    fig4.omega = globals.omega;
    fig4.engine = globals.engine;
    fig4.threads = globals.threads;
    status = cs_run_fig4(&fig4, out_or(globals, "fig4.csv").c_str(), plot);
  } else if (*ca) {
    adia.ramp_times = ramp_times.data();
    adia.ramp_count = ramp_times.size();
    adia.omega = globals.omega;
    adia.rate_mode = rate_mode == "per-ramp" ? CS_RATE_PER_RAMP : CS_RATE_SHARED;
    adia.state_snr = skip_snr ? 0 : 1;
    adia.threads = globals.threads;
    std::vector<cs_adiabatic_run> runs(ramp_times.size());
    size_t count = 0;
    status = cs_run_adiabatic(&adia, out_or(globals, "adiabatic.csv").c_str(), runs.data(), runs.size(), &count);
    if (status == CS_OK) {
      std::printf("%-8s %-11s %-10s %-6s %-14s %-11s %-14s %-10s %-10s\n", "T", "k", "g_end", "N", "fidelity[%]",
                  "int.err[%]", "F(g_final)[%]", "snr_state", "snr_ideal");
      for (size_t i = 0; i < count; ++i) {
        const auto& r = runs[i];
        std::printf("%-8.4g %-11.8f %-10.7f %-6zu %-14.7f %-11.2e %-14.7f %-10.4g %-10.4g\n", r.ramp_time, r.rate,
                    r.g_end, r.cutoff, 100.0 * r.fidelity, 100.0 * r.integrator_error,
                    100.0 * r.fidelity_reaching_g_final, r.snr_state, r.snr_ground);
      }
      if (adia.rate_mode == CS_RATE_SHARED) {
        std::printf("rate k is fixed by the first ramp; F(g_final) re-derives k so each ramp ends at g_final\n");
      }
    }
  } else if (*cv) {
    status = cs_run_verify(level == "full" ? CS_VERIFY_FULL : CS_VERIFY_FAST, globals.threads, print_sink, nullptr);
  }

  if (status != CS_OK) return fail(status);
  return 0;
}
