#include "critsense/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <system_error>

#include <fmt/format.h>

#include "critsense/dynamics.hpp"
#include "critsense/errors.hpp"
#include "critsense/fock.hpp"
#include "critsense/gaussian.hpp"
#include "critsense/metrology.hpp"
#include "critsense/model.hpp"
#include "parallel.hpp"

namespace critsense {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 2) throw InvalidArgument("a grid needs at least 2 points");
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

std::unique_ptr<DynamicsEngine> make_dynamics(Engine engine, const ModelParams& p, double alpha,
                                              double t_max) {
  switch (engine) {
    case Engine::Gaussian:
      return std::make_unique<GaussianDynamics>(p, alpha);
    case Engine::Fock:
      return std::make_unique<FockDynamics>(p, alpha, t_max);
    default:
      return std::make_unique<AnalyticDynamics>(p, alpha);
  }
}

// Engines whose values fill the table: the selected one, or all three with
// the analytic one in the primary column.
std::vector<Engine> engines_for(Engine e) {
  if (e == Engine::All) return {Engine::Analytic, Engine::Gaussian, Engine::Fock};
  return {e};
}

void append_engine_columns(std::vector<std::string>& header, Engine e,
                           const std::vector<std::string>& names) {
  if (e != Engine::All) return;
  for (const char* suffix : {"_gaussian", "_fock"}) {
    for (const auto& n : names) header.push_back(n + suffix);
  }
}

void require_below_critical(double g, std::string_view what) {
  if (g >= 1.0) throw GaplessPhase(fmt::format("{} = {} must be below the critical point 1", what, g));
  if (g < 0.0) throw InvalidArgument(fmt::format("{} = {} must be nonnegative", what, g));
}

}  // namespace

Engine parse_engine(std::string_view name) {
  if (name == "analytic") return Engine::Analytic;
  if (name == "gaussian") return Engine::Gaussian;
  if (name == "fock") return Engine::Fock;
  if (name == "all") return Engine::All;
  throw InvalidArgument(fmt::format("unknown engine '{}'", name));
}

std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::Analytic: return "analytic";
    case Engine::Gaussian: return "gaussian";
    case Engine::Fock: return "fock";
    case Engine::All: return "all";
  }
  return "analytic";
}

RateMode parse_rate_mode(std::string_view name) {
  if (name == "shared") return RateMode::Shared;
  if (name == "per-ramp") return RateMode::PerRamp;
  throw InvalidArgument(fmt::format("unknown rate mode '{}'", name));
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (!std::isnan(row[i])) out += fmt::format("{:.17g}", row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(fmt::format("cannot open '{}' for writing", tmp.string()));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError(fmt::format("failed writing '{}'", tmp.string()));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError(fmt::format("cannot move output into place at '{}'", path.string()));
  }
}

std::string plot_script(const std::filesystem::path& csv, const Table& table,
                        std::string_view x_column, const std::vector<std::string>& y_columns,
                        std::string_view series_column) {
  auto column = [&](std::string_view name) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (table.header[i] == name) return i + 1;
    }
    throw InvalidArgument(fmt::format("no column '{}' to plot", name));
  };
  std::string out = "set datafile separator ','\nset key autotitle columnhead\n";
  out += fmt::format("set xlabel '{}'\n", x_column);
  const std::size_t x = column(x_column);
  std::vector<std::string> parts;
  for (const auto& y : y_columns) {
    const std::size_t yc = column(y);
    if (series_column.empty()) {
      parts.push_back(fmt::format("'{}' using {}:{} with lines", csv.filename().string(), x, yc));
    } else {
      // One line per distinct series value, separated via gnuplot's ternary filter.
      std::vector<double> keys;
      const std::size_t sc = column(series_column) - 1;
      for (const auto& row : table.rows) {
        if (std::find(keys.begin(), keys.end(), row[sc]) == keys.end()) keys.push_back(row[sc]);
      }
      for (double k : keys) {
        parts.push_back(fmt::format("'{}' using {}:(${}=={:.17g} ? ${} : 1/0) with lines title '{} {}={}'",
                                    csv.filename().string(), x, sc + 1, k, yc, y, series_column, k));
      }
    }
  }
  out += "plot ";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i ? ", \\\n     " : "") + parts[i];
  }
  out += '\n';
  return out;
}

Table run_fig1(const Fig1Options& o) {
  for (double g : o.g) require_below_critical(g, "g");
  Table table{{"g", "alpha", "t", "qfi"}, {}};
  append_engine_columns(table.header, o.engine, {"qfi"});

  struct Series {
    double g;
    double alpha;
  };
  std::vector<Series> series;
  for (double g : o.g) {
    for (double a : o.alpha) series.push_back({g, a});
  }
  std::vector<std::vector<std::vector<double>>> blocks(series.size());

  detail::parallel_for(series.size(), o.threads, [&](std::size_t s) {
    const ModelParams p = make_params(o.omega, series[s].g);
    const double t_max = o.t_max > 0.0 ? o.t_max : 2.0 * revival_time(p, 1);
    const std::vector<double> times = linspace(0.0, t_max, o.points);
    std::vector<std::unique_ptr<DynamicsEngine>> engines;
    for (Engine e : engines_for(o.engine)) engines.push_back(make_dynamics(e, p, series[s].alpha, t_max));
    for (double t : times) {
      std::vector<double> row{series[s].g, series[s].alpha, t};
      for (auto& e : engines) row.push_back(e->qfi(t));
      blocks[s].push_back(std::move(row));
    }
  });
  for (auto& b : blocks) {
    for (auto& r : b) table.rows.push_back(std::move(r));
  }
  return table;
}

Fig2Result run_fig2(const Fig2Options& o) {
  for (double g : o.g) require_below_critical(g, "g");
  if (o.n_max < 1) throw InvalidArgument("n_max must be positive");
  if (o.points_per_period < 4) throw InvalidArgument("points_per_period must be at least 4");

  Fig2Result result;
  result.table = Table{{"g", "t", "inverted_variance"}, {}};
  append_engine_columns(result.table.header, o.engine, {"inverted_variance"});
  result.maxima = Table{{"g", "n", "t", "inverted_variance", "revival_time", "closed_form"}, {}};
  result.fits = Table{{"g", "C", "D", "r_squared", "points_used"}, {}};

  std::vector<std::vector<std::vector<double>>> blocks(o.g.size());
  result.series.resize(o.g.size());

  detail::parallel_for(o.g.size(), o.threads, [&](std::size_t s) {
    const double g = o.g[s];
    const ModelParams p = make_params(o.omega, g);
    const double t1 = revival_time(p, 1);
    const auto ppp = static_cast<double>(o.points_per_period);
    // Grid t_i = T1 * i / ppp contains every T_n and covers the last window.
    const std::size_t count = o.n_max * o.points_per_period + o.points_per_period / 2 + 1;
    const double t_max = t1 * static_cast<double>(count - 1) / ppp;

    std::vector<std::unique_ptr<DynamicsEngine>> engines;
    for (Engine e : engines_for(o.engine)) engines.push_back(make_dynamics(e, p, o.alpha, t_max));

    std::vector<double> times(count), primary(count);
    for (std::size_t i = 0; i < count; ++i) {
      times[i] = t1 * static_cast<double>(i) / ppp;
      std::vector<double> row{g, times[i]};
      for (auto& e : engines) row.push_back(e->inverted_variance(times[i]));
      primary[i] = row[2];
      blocks[s].push_back(std::move(row));
    }

    std::vector<double> lo, hi;
    Fig2Series series{g, {}, {}, {}, {}};
    for (std::size_t n = 1; n <= o.n_max; ++n) {
      lo.push_back((static_cast<double>(n) - 0.5) * t1);
      hi.push_back((static_cast<double>(n) + 0.5) * t1);
      series.revival.push_back(revival_time(p, n));
      series.peak_formula.push_back(inverted_variance_peak(p, o.alpha, n));
    }
    series.maxima = window_maxima(times, primary, lo, hi);
    std::vector<double> mt, mv;
    for (const auto& m : series.maxima) {
      mt.push_back(m.t);
      mv.push_back(m.value);
    }
    series.fit = fit_power_law(mt, mv);
    result.series[s] = std::move(series);
  });

  for (auto& b : blocks) {
    for (auto& r : b) result.table.rows.push_back(std::move(r));
  }
  for (const auto& s : result.series) {
    for (std::size_t n = 0; n < s.maxima.size(); ++n) {
      result.maxima.rows.push_back({s.g, static_cast<double>(n + 1), s.maxima[n].t, s.maxima[n].value,
                                    s.revival[n], s.peak_formula[n]});
    }
    result.fits.rows.push_back({s.g, s.fit.amplitude, s.fit.exponent, s.fit.r_squared,
                                static_cast<double>(s.fit.points_used)});
  }
  return result;
}

Table run_fig3(const Fig3Options& o) {
  require_below_critical(o.g_max, "g_max");
  require_below_critical(o.g_min, "g_min");
  if (o.g_min > o.g_max) throw InvalidArgument("g_min exceeds g_max");
  Table table{{"g", "T", "inverted_variance", "qfi", "ratio"}, {}};
  append_engine_columns(table.header, o.engine, {"inverted_variance", "qfi"});

  const std::vector<double> grid = linspace(o.g_min, o.g_max, o.points);
  table.rows.resize(grid.size());
  detail::parallel_for(grid.size(), o.threads, [&](std::size_t i) {
    const ModelParams p = make_params(o.omega, grid[i]);
    const double t1 = revival_time(p, 1);
    std::vector<double> row{grid[i], t1};
    std::vector<double> extra;
    const auto engines = engines_for(o.engine);
    for (std::size_t k = 0; k < engines.size(); ++k) {
      auto e = make_dynamics(engines[k], p, o.alpha, t1);
      const double v = e->inverted_variance(t1);
      const double q = e->qfi(t1);
      if (k == 0) {
        row.insert(row.end(), {v, q, v / q});
      } else {
        extra.insert(extra.end(), {v, q});
      }
    }
    row.insert(row.end(), extra.begin(), extra.end());
    table.rows[i] = std::move(row);
  });
  return table;
}

namespace {

struct AdiabaticMetrics {
  double snr;
  double fisher_ratio;
};

AdiabaticMetrics adiabatic_metrics(Engine e, const ModelParams& p) {
  const double w = p.omega();
  const double h = 1e-5 * w;
  switch (e) {
    case Engine::Gaussian: {
      // Ground state as a Gaussian family in omega at fixed epsilon.
      auto ground = [&](double omega) {
        return squeezed_vacuum_gaussian(squeeze_parameter(with_omega_fixed_drive(p, omega).g()));
      };
      const GaussianState s = ground(w);
      const GaussianState up = ground(w + h);
      const GaussianState down = ground(w - h);
      const double qfi = pure_gaussian_qfi(s, (up.mean - down.mean) / (2 * h), (up.cov - down.cov) / (2 * h));
      double best = 0.0;
      for (int k = 0; k <= 3600; ++k) {
        const double phi = std::numbers::pi * k / 3600.0;
        const double slope =
            (rotated_quadrature_moment(up, phi).mean_sq - rotated_quadrature_moment(down, phi).mean_sq) / (2 * h);
        best = std::max(best, slope * slope / rotated_quadrature_moment(s, phi).var_of_sq);
      }
      return {w * w * qfi, qfi > 0.0 ? best / qfi : kNaN};
    }
    case Engine::Fock: {
      const CutoffChoice choice = converge_cutoff(
          [&](std::size_t n) {
            const FockMoments m = moments_fock(FockHamiltonian(p, n).ground_state());
            return std::vector<double>{m.var_x, m.var_p, m.var_x2};
          },
          1e-10);
      auto family = [&](double omega) {
        return FockHamiltonian(with_omega_fixed_drive(p, omega), choice.cutoff).ground_state();
      };
      const double qfi = qfi_overlap(family, w, 1e-4 * w).value;
      // Homodyne of X (phi = 0) from number-basis moments.
      const FockMoments up = moments_fock(family(w + h));
      const FockMoments down = moments_fock(family(w - h));
      const FockMoments mid = moments_fock(family(w));
      const double slope = ((up.var_x + up.mean_x * up.mean_x) - (down.var_x + down.mean_x * down.mean_x)) / (2 * h);
      const double fisher = slope * slope / mid.var_x2;
      return {w * w * qfi, qfi > 0.0 ? fisher / qfi : kNaN};
    }
    default: {
      const double qfi = qfi_adiabatic_omega(p);
      return {snr_omega(p), qfi > 0.0 ? homodyne_fisher_max(p).fisher / qfi : kNaN};
    }
  }
}

}  // namespace

Table run_fig4(const Fig4Options& o) {
  require_below_critical(o.g_max, "g_max");
  if (!(o.g_min > 0.0)) throw InvalidArgument("g_min must be positive");
  if (o.g_min > o.g_max) throw InvalidArgument("g_min exceeds g_max");
  Table table{{"g", "snr", "fisher_ratio"}, {}};
  append_engine_columns(table.header, o.engine, {"snr", "fisher_ratio"});

  const std::vector<double> grid = linspace(o.g_min, o.g_max, o.points);
  table.rows.resize(grid.size());
  detail::parallel_for(grid.size(), o.threads, [&](std::size_t i) {
    const ModelParams p = make_params(o.omega, grid[i]);
    std::vector<double> row{grid[i]};
    for (Engine e : engines_for(o.engine)) {
      const AdiabaticMetrics m = adiabatic_metrics(e, p);
      row.insert(row.end(), {m.snr, m.fisher_ratio});
    }
    table.rows[i] = std::move(row);
  });
  return table;
}

namespace {

struct RampOutcome {
  double fidelity;
  RampResult result;
};

RampOutcome ramp_fidelity(const RampSchedule& schedule, const ModelParams& base, std::size_t cutoff,
                          double dt) {
  const FockVector vacuum = FockVector::number_state(0, cutoff);
  RampResult r = evolve_ramp(schedule, base, vacuum, dt);
  const FockVector target = squeezed_vacuum_fock(squeeze_parameter(schedule.g_final()), cutoff);
  return {fidelity(r.state, target), std::move(r)};
}

std::size_t ramp_cutoff(const RampSchedule& schedule, const ModelParams& base, double dt) {
  return converge_cutoff(
             [&](std::size_t n) { return std::vector<double>{ramp_fidelity(schedule, base, n, dt).fidelity}; },
             1e-9)
      .cutoff;
}

}  // namespace

std::vector<AdiabaticRun> run_adiabatic(const AdiabaticOptions& o) {
  require_below_critical(o.g_final, "g_final");
  if (o.ramp_times.empty()) throw InvalidArgument("at least one ramp time is required");
  const ModelParams base = make_params(o.omega, 0.0);
  // Ramp times are given in units of 1/omega.
  const double shared_rate = RampSchedule::reaching(o.g_final, o.ramp_times.front() / o.omega).rate();

  std::vector<AdiabaticRun> runs(o.ramp_times.size());
  detail::parallel_for(runs.size(), o.threads, [&](std::size_t i) {
    const double duration = o.ramp_times[i] / o.omega;
    const RampSchedule reaching = RampSchedule::reaching(o.g_final, duration);
    const RampSchedule schedule =
        o.rate_mode == RateMode::Shared ? RampSchedule::with_rate(shared_rate, duration) : reaching;
    const double dt = o.dt / o.omega;

    const std::size_t cutoff = o.cutoff ? o.cutoff : ramp_cutoff(schedule, base, dt);
    const RampOutcome full = ramp_fidelity(schedule, base, cutoff, dt);
    const RampOutcome half = ramp_fidelity(schedule, base, cutoff, 0.5 * full.result.step);

    AdiabaticRun run{};
    run.ramp_time = o.ramp_times[i];
    run.rate = schedule.rate();
    run.g_end = schedule.g_final();
    run.cutoff = cutoff;
    run.steps = full.result.steps;
    run.step = full.result.step;
    run.fidelity = full.fidelity;
    run.fidelity_half_step = half.fidelity;
    run.integrator_error = std::abs(full.fidelity - half.fidelity);
    run.norm_drift = full.result.norm_drift;
    run.fidelity_reaching_g_final = o.rate_mode == RateMode::PerRamp
                                        ? full.fidelity
                                        : ramp_fidelity(reaching, base, cutoff, dt).fidelity;
    run.snr_state = kNaN;
    run.snr_ground = snr_omega(make_params(o.omega, run.g_end));
    if (o.state_snr) {
      // omega family at fixed epsilon(t) = omega0 g(t).
      RampOptions ro;
      ro.drive_scale = o.omega;
      ro.fixed_steps = full.result.steps + full.result.steps / 1000 + 1;
      auto family = [&](double omega) {
        return evolve_ramp(schedule, make_params(omega, 0.0), FockVector::number_state(0, cutoff), dt, ro).state;
      };
      run.snr_state = o.omega * o.omega * qfi_overlap(family, o.omega, 1e-4 * o.omega).value;
    }
    runs[i] = run;
  });
  return runs;
}

Table adiabatic_table(const std::vector<AdiabaticRun>& runs) {
  Table t{{"t_ramp", "k", "g_end", "cutoff", "steps", "dt", "fidelity", "fidelity_half_step",
           "integrator_error", "norm_drift", "snr_state", "snr_ground", "fidelity_reaching_g_final"},
          {}};
  for (const auto& r : runs) {
    t.rows.push_back({r.ramp_time, r.rate, r.g_end, static_cast<double>(r.cutoff), static_cast<double>(r.steps),
                      r.step, r.fidelity, r.fidelity_half_step, r.integrator_error, r.norm_drift, r.snr_state,
                      r.snr_ground, r.fidelity_reaching_g_final});
  }
  return t;
}

}  // namespace critsense
