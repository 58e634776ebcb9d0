#include "tpi/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "json.hpp"
#include "tpi/errors.hpp"

namespace tpi {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::filesystem::path prepare(const RunConfig& cfg, const RunOptions& opts) {
  std::filesystem::path dir =
      opts.output_directory.empty() ? cfg.output_directory : opts.output_directory;
  std::filesystem::create_directories(dir);
  return dir;
}

std::ofstream open(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + file.string(), "output.directory");
  return out;
}

void write_meta(const std::filesystem::path& dir, const RunConfig& cfg, const std::string& cmd,
                const RunOptions& opts, double seconds) {
  nlohmann::json meta;
  meta["tool"] = "tpi-sim";
  meta["version"] = kVersion;
  meta["subcommand"] = cmd;
  meta["config_hash"] = cfg.config_hash;
  meta["threads"] = opts.threads;
  meta["wall_time_s"] = seconds;
  auto out = open(dir / "run_meta.json");
  out << meta.dump(2) << '\n';
}

SweepSpec spec_for(const RunConfig& cfg, SweepVariable variable) {
  const SweepSettings& s = *cfg.sweep;
  return SweepSpec{variable, s.start, s.stop, s.n_points, cfg.reduced, cfg.source, cfg.amps, {}};
}

void write_table(std::ostream& out, const SweepTable& table, SweepVariable variable, int p) {
  out << "parameter_name,parameter_value,rate,gamma_mag,gamma_prime_mag,cosine_argument\n";
  const std::string name = to_string(variable);
  for (const auto& row : table) {
    out << name << ',' << fmt(row.parameter_value, p) << ',' << fmt(row.result.rate, p) << ','
        << fmt(row.result.gamma_mag, p) << ',' << fmt(row.result.gamma_prime_mag, p) << ','
        << fmt(row.result.cosine_argument, p) << '\n';
  }
}

}  // namespace

void run_sweep_command(const RunConfig& cfg, const RunOptions& opts) {
  const auto t0 = Clock::now();
  if (!cfg.sweep) throw ValidationError("sweep.variable: required for sweep", "sweep.variable");
  const auto dir = prepare(cfg, opts);
  const SweepVariable variable = cfg.sweep->variable;
  const SweepTable table = run_sweep(spec_for(cfg, variable), opts.threads);
  {
    auto out = open(dir / "sweep.csv");
    write_table(out, table, variable, cfg.precision);
  }

  auto out = open(dir / "metrics.csv");
  out << "metric,value\n";
  const int p = cfg.precision;
  if (variable == SweepVariable::DeltaPhi || variable == SweepVariable::DeltaL) {
    try {
      const FringeMetrics m = extract_fringe_metrics(table);
      out << "visibility," << fmt(m.visibility, p) << '\n';
      out << "period," << fmt(m.period, p) << '\n';
      out << "envelope_halfwidth," << fmt(m.envelope_halfwidth, p) << '\n';
    } catch (const InsufficientSampling& e) {
      out << "fringe_metrics_available,0\n";
      std::cerr << "warning: fringe metrics unavailable: " << e.what() << '\n';
    }
  } else {
    // Dip widths need both asymmetry axes; scan the companion axis over the
    // same range.
    SweepTable prime = table, dprime = table;
    if (variable == SweepVariable::DeltaLPrime) {
      dprime = run_sweep(spec_for(cfg, SweepVariable::DeltaLDPrime), opts.threads);
    } else if (variable == SweepVariable::DeltaLDPrime) {
      prime = run_sweep(spec_for(cfg, SweepVariable::DeltaLPrime), opts.threads);
    }
    try {
      const DipMetrics m = extract_dip_metrics(prime, dprime);
      out << "extremum_kind," << (m.extremum_kind == Extremum::Dip ? "dip" : "hump") << '\n';
      out << "depth," << fmt(m.depth, p) << '\n';
      out << "fwhm_prime," << fmt(m.fwhm_prime, p) << '\n';
      out << "fwhm_dprime," << fmt(m.fwhm_dprime, p) << '\n';
      out << "not_monotone," << (m.not_monotone ? 1 : 0) << '\n';
    } catch (const InsufficientSampling& e) {
      out << "dip_metrics_available,0\n";
      std::cerr << "warning: dip metrics unavailable: " << e.what() << '\n';
    }
  }
  write_meta(dir, cfg, "sweep", opts,
             std::chrono::duration<double>(Clock::now() - t0).count());
}

std::vector<DelayTriple> validation_delays(const SourceModel& source, TopdcChoice choice,
                                           std::size_t points, double span) {
  const auto w = source.phase_matching_for(choice).widths();
  std::vector<double> unit(points, 0.0);
  for (std::size_t i = 0; i < points && points > 1; ++i) {
    unit[i] = -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  std::vector<DelayTriple> out;
  for (double a : unit) {
    for (double b : unit) {
      for (double c : unit) out.push_back({a / w[0], b / w[0], c / w[1]});
    }
  }
  return out;
}

void run_validate_command(const RunConfig& cfg, const RunOptions& opts) {
  const auto t0 = Clock::now();
  const auto dir = prepare(cfg, opts);
  const ValidateSettings& v = cfg.validate;
  const auto delays =
      validation_delays(cfg.source, v.oracle.choice, v.delay_points, v.delay_span);
  std::vector<double> ratios = v.ratios;
  if (ratios.empty()) {
    const double pm_width = cfg.source.phase_matching_for(v.oracle.choice).widths()[0];
    ratios.push_back(cfg.source.pump.characteristic_width() / pm_width);
  }
  const auto result = factorization_error_sweep(cfg.source, delays, ratios,
                                                cfg.reduced.delta_phi, v.oracle, opts.threads);
  const int p = cfg.precision;
  {
    auto out = open(dir / "validate.csv");
    out << "ratio,delta_tau,delta_tau_prime,delta_tau_dprime,factorized,oracle,rel_error\n";
    for (const auto& r : result) {
      for (const auto& row : r.rows) {
        out << fmt(row.ratio, p) << ',' << fmt(row.delays.delta_tau, p) << ','
            << fmt(row.delays.delta_tau_prime, p) << ',' << fmt(row.delays.delta_tau_dprime, p)
            << ',' << fmt(row.factorized, p) << ',' << fmt(row.oracle, p) << ','
            << fmt(row.rel_error, p) << '\n';
      }
    }
  }
  {
    auto out = open(dir / "validate_summary.csv");
    out << "ratio,max_rel_error\n";
    for (const auto& r : result) out << fmt(r.ratio, p) << ',' << fmt(r.max_error, p) << '\n';
  }
  write_meta(dir, cfg, "validate", opts,
             std::chrono::duration<double>(Clock::now() - t0).count());
}

void run_reduce_command(const RunConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const auto t0 = Clock::now();
  const ReducedParameters& r = cfg.reduced;
  char buf[512];
  auto line = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    out << buf;
  };
  out << "# source.type = " << (cfg.source.kind == SourceKind::Cpdc ? "cpdc" : "topdc") << '\n';
  line("geometry.delta_L", r.delta_L);
  line("geometry.delta_L_prime", r.delta_L_prime);
  line("geometry.delta_L_dprime", r.delta_L_dprime);
  line("geometry.delta_phi", r.delta_phi);
  if (cfg.source.kind == SourceKind::Topdc)
    out << "geometry.choice = " << static_cast<int>(r.choice) << '\n';
  std::snprintf(buf, sizeof buf, "# carriers [rad/m]: k_p0 = %.17g k0_prime = %.17g k0_dprime = %.17g\n",
                r.k_p0, r.k0_prime, r.k0_dprime);
  out << buf;
  std::snprintf(buf, sizeof buf, "# cosine argument [rad] = %.17g\n", cosine_argument(r));
  out << buf;

  if (cfg.source.kind == SourceKind::Topdc) {
    out << "# choice  delta_L  delta_L_prime  delta_L_dprime  k0_prime  k0_dprime\n";
    for (TopdcChoice c : {TopdcChoice::One, TopdcChoice::Two, TopdcChoice::Three}) {
      ReducedParameters rc = r;
      if (cfg.path) {
        rc = attach_carriers(reduce_topdc(*cfg.path, c), cfg.source.centrals, SourceKind::Topdc);
      } else {
        // Direct form: transform the given choice's lengths into choice c.
        // Lengths transform contragrediently to detunings, L_1 = M_r^T L_r.
        const auto l1 = choice_map(r.choice).transposed().apply(r.delta_L_prime, r.delta_L_dprime);
        const auto lc = choice_map(c).transposed().inverse().apply(l1[0], l1[1]);
        rc.delta_L_prime = lc[0];
        rc.delta_L_dprime = lc[1];
        rc.choice = c;
        rc = attach_carriers(rc, cfg.source.centrals, SourceKind::Topdc);
      }
      std::snprintf(buf, sizeof buf, "# %d  %.17g  %.17g  %.17g  %.17g  %.17g\n",
                    static_cast<int>(c), rc.delta_L, rc.delta_L_prime, rc.delta_L_dprime,
                    rc.k0_prime, rc.k0_dprime);
      out << buf;
    }
  }
  if (!opts.output_directory.empty()) {
    const auto dir = prepare(cfg, opts);
    write_meta(dir, cfg, "reduce", opts,
               std::chrono::duration<double>(Clock::now() - t0).count());
  }
}

}  // namespace tpi
