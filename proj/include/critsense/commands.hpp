#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "critsense/fit.hpp"

namespace critsense {

enum class Engine { Analytic, Gaussian, Fock, All };

Engine parse_engine(std::string_view name);
std::string_view engine_name(Engine e);

/// Numeric table; NaN cells are written empty.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header row first, 17 significant digits, '.' separator, LF endings.
std::string format_csv(const Table& table);

/// Writes through a temporary sibling and renames; nothing is left behind
/// on failure. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Companion gnuplot script plotting `y_columns` against `x_column`,
/// grouped by `series_column` when non-empty.
std::string plot_script(const std::filesystem::path& csv, const Table& table,
                        std::string_view x_column, const std::vector<std::string>& y_columns,
                        std::string_view series_column);

struct Fig1Options {
  std::vector<double> g{0.92, 0.94, 0.96};
  std::vector<double> alpha{1.0, 2.0, 3.0};
  double omega = 1.0;
  double t_max = 0.0;  // <= 0: 2 T1(g) for each series
  std::size_t points = 401;
  Engine engine = Engine::Analytic;
  unsigned threads = 1;
};

/// Columns g,alpha,t,qfi (+ qfi_gaussian,qfi_fock for Engine::All).
Table run_fig1(const Fig1Options& options);

struct Fig2Options {
  std::vector<double> g{0.92, 0.94, 0.96};
  double alpha = 1.0;
  double omega = 1.0;
  std::size_t n_max = 5;
  std::size_t points_per_period = 200;  // samples per T1
  Engine engine = Engine::Analytic;
  unsigned threads = 1;
};

struct Fig2Series {
  double g;
  std::vector<SampledMaximum> maxima;  // n = 1..n_max
  std::vector<double> revival;         // T_n
  std::vector<double> peak_formula;    // closed-form V(T_n)
  FitResult fit;
};

struct Fig2Result {
  Table table;   // g,t,inverted_variance
  Table maxima;  // g,n,t,inverted_variance,revival_time,closed_form
  Table fits;    // g,C,D,r_squared,points_used
  std::vector<Fig2Series> series;
};

Fig2Result run_fig2(const Fig2Options& options);

struct Fig3Options {
  double g_min = 0.5;
  double g_max = 0.99;
  std::size_t points = 50;
  double alpha = 1.0;
  double omega = 1.0;
  Engine engine = Engine::Analytic;
  unsigned threads = 1;
};

/// Columns g,T,inverted_variance,qfi,ratio with T = T1(g).
Table run_fig3(const Fig3Options& options);

struct Fig4Options {
  double g_min = 0.05;
  double g_max = 0.99;
  std::size_t points = 95;
  double omega = 1.0;
  Engine engine = Engine::Analytic;
  unsigned threads = 1;
};

/// Columns g,snr,fisher_ratio.
Table run_fig4(const Fig4Options& options);

enum class RateMode {
  Shared,   // k fixed by reaching g_final at the first ramp time
  PerRamp,  // k re-derived so every ramp ends at g_final
};

RateMode parse_rate_mode(std::string_view name);

struct AdiabaticOptions {
  double g_final = 0.98;
  std::vector<double> ramp_times{100.0, 105.0};  // in units of 1/omega
  double omega = 1.0;
  double dt = 0.01;
  std::size_t cutoff = 0;  // 0: converge by doubling from 64
  RateMode rate_mode = RateMode::Shared;
  bool state_snr = true;
  unsigned threads = 1;
};

struct AdiabaticRun {
  double ramp_time;
  double rate;
  double g_end;
  std::size_t cutoff;
  std::size_t steps;
  double step;
  double fidelity;
  double fidelity_half_step;
  double integrator_error;
  double norm_drift;
  double snr_state;    // omega^2 QFI_omega of the output state (NaN if skipped)
  double snr_ground;   // same quantity for the ideal ground state at g_end
  double fidelity_reaching_g_final;  // k re-derived so g(T) = g_final
};

std::vector<AdiabaticRun> run_adiabatic(const AdiabaticOptions& options);
Table adiabatic_table(const std::vector<AdiabaticRun>& runs);

enum class VerifyLevel { Fast, Full };

struct Check {
  std::string name;
  double measured;
  double tolerance;
  bool passed;
  bool informational;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool passed() const;
  std::string format() const;
};

VerifyReport run_verify(VerifyLevel level, unsigned threads = 1);

}  // namespace critsense
