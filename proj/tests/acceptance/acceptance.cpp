// Acceptance checks 1-8. One PASS/FAIL line per criterion; exit status is
// the number of failures.

#include <algorithm>
#include <array>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tpi/coherence.hpp"
#include "tpi/constants.hpp"
#include "tpi/experiments.hpp"
#include "tpi/oracle.hpp"
#include "tpi/pathgeom.hpp"
#include "tpi/rates.hpp"

using namespace tpi;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::size_t threads() { return std::max(1u, std::thread::hardware_concurrency()); }

SweepSpec sweep(SweepVariable v, double a, double b, std::size_t n, SourceModel src,
                double dphi = 0.0, AlternativeAmplitudes amps = AlternativeAmplitudes::equal(1.0)) {
  ReducedParameters fixed;
  fixed.delta_phi = dphi;
  return SweepSpec{v, a, b, n, fixed, std::move(src), amps, {}};
}

PathConfiguration random_path(std::mt19937_64& rng, double max_len) {
  std::uniform_real_distribution<double> len(0.0, max_len), ph(-tpi::kPi, tpi::kPi);
  PathConfiguration p;
  for (double* l : {&p.l_a1, &p.l_b1, &p.l_c1, &p.l_p1, &p.l_a2, &p.l_b2, &p.l_c2, &p.l_p2})
    *l = len(rng);
  for (double* f : {&p.phi_a1, &p.phi_b1, &p.phi_c1, &p.phi_p1, &p.phi_a2, &p.phi_b2, &p.phi_c2,
                    &p.phi_p2})
    *f = ph(rng);
  return p;
}

// 1. Phase fringe at zero path differences.
Outcome criterion1() {
  const auto src = SourceModel::cpdc(
      CentralFrequencies::from_wavelengths(1000e-9, 2000e-9, 2000e-9),
      SpectralDensity::gaussian(1e13),
      JointSpectralDensity::separable(SpectralDensity::gaussian(2e13),
                                      SpectralDensity::gaussian(3e13)));
  double worst = 0, vis_err = 0;
  for (double C : {1.0, 2.5}) {
    const auto t = run_sweep(sweep(SweepVariable::DeltaPhi, -3 * kPi, 3 * kPi, 97, src, 0.0,
                                   AlternativeAmplitudes::equal(C)));
    for (const auto& row : t)
      worst = std::max(worst, std::abs(row.result.rate - C * (1 + std::cos(row.parameter_value))) / C);
    vis_err = std::max(vis_err, std::abs(extract_fringe_metrics(t).visibility - 1.0));
  }
  return {worst < 1e-12 && vis_err < 1e-9,
          fmt("max |R - C(1+cos)|/C = %.2e, |visibility - 1| = %.2e", worst, vis_err)};
}

// 2. Fringe period and Gaussian envelope decay along the pump path difference.
Outcome criterion2() {
  const auto f = CentralFrequencies::from_wavelengths(1000e-9, 2000e-9, 2000e-9);
  const double lambda_p = 2 * kPi * kSpeedOfLight / f.omega_p0();
  const double Lc = 50 * lambda_p;
  const auto src = SourceModel::cpdc(
      f, SpectralDensity::gaussian(kSpeedOfLight / Lc),
      JointSpectralDensity::separable(SpectralDensity::gaussian(2e13),
                                      SpectralDensity::gaussian(3e13)));
  const double step = lambda_p / 32;
  const auto n = static_cast<std::size_t>(std::lround(7 * Lc / step)) + 1;
  const auto full = run_sweep(sweep(SweepVariable::DeltaL, -3.5 * Lc, 3.5 * Lc, n, src), threads());
  const auto m = extract_fringe_metrics(full);
  // Local scan of four periods centred on 3 L_c.
  const auto local = run_sweep(
      sweep(SweepVariable::DeltaL, 3 * Lc - 2 * lambda_p, 3 * Lc + 2 * lambda_p, 129, src));
  const double v3 = extract_fringe_metrics(local).visibility;
  const bool ok = std::abs(m.period - 500e-9) <= 0.5e-9 && v3 < 0.012;
  return {ok, fmt("period = %.4f nm, visibility(3 L_c) = %.5f (exp(-4.5) = %.5f), "
                  "envelope 1/e half width = %.4f L_c",
                  m.period * 1e9, v3, std::exp(-4.5), m.envelope_halfwidth / Lc)};
}

// 3. Dip and hump along the asymmetry lengths at degenerate frequencies.
Outcome criterion3() {
  const double s1 = 2e13, s2 = 3e13;
  const auto src = SourceModel::cpdc(
      degenerate_frequencies(SourceKind::Cpdc, 500e-9), SpectralDensity::gaussian(1e13),
      JointSpectralDensity::separable(SpectralDensity::gaussian(s1), SpectralDensity::gaussian(s2)));
  const double span = 4 * kSpeedOfLight / s1;
  const std::size_t n = 801;
  auto pair = [&](double dphi) {
    return std::make_pair(
        run_sweep(sweep(SweepVariable::DeltaLPrime, -span, span, n, src, dphi), threads()),
        run_sweep(sweep(SweepVariable::DeltaLDPrime, -span, span, n, src, dphi), threads()));
  };
  const auto [dp, dq] = pair(kPi);
  const auto [hp, hq] = pair(0.0);
  const auto dip = extract_dip_metrics(dp, dq);
  const auto hump = extract_dip_metrics(hp, hq);
  const double r_dip = dp[n / 2].result.rate, r_hump = hp[n / 2].result.rate;
  const double expected = kSpeedOfLight * 2 * std::sqrt(2 * std::log(2.0)) / s1;
  const double rel = std::abs(dip.fwhm_prime / expected - 1.0);
  const bool ok = std::abs(r_dip) <= 1e-9 && std::abs(r_hump - 2.0) <= 1e-9 && rel < 0.01 &&
                  dip.extremum_kind == Extremum::Dip && hump.extremum_kind == Extremum::Hump;
  return {ok, fmt("R(0; pi) = %.2e, R(0; 0) - 2 = %.2e, FWHM' = %.5f um vs %.5f um (rel %.2e)",
                  r_dip, r_hump - 2.0, dip.fwhm_prime * 1e6, expected * 1e6, rel)};
}

// 4. Brute-force triple integral against the factorized product.
Outcome criterion4() {
  const double sig = 1e13;
  const auto src = SourceModel::cpdc(
      CentralFrequencies::from_wavelengths(1000e-9, 1900e-9, 2100e-9),
      SpectralDensity::gaussian(0.5 * sig),
      JointSpectralDensity::separable(SpectralDensity::gaussian(sig),
                                      SpectralDensity::gaussian(1.5 * sig)));
  std::vector<DelayTriple> delays;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      for (int k = -2; k <= 2; ++k) delays.push_back({i / sig, j / sig, k / sig});

  OracleConfig cfg;  // 128^3, support 8 widths
  const double dphi = 0.3;
  const OracleEngine engine(src, cfg);
  double worst = 0, worst_pointwise = 0;
  for (const auto& d : delays) {
    const double o = engine.term(d, dphi);
    const double fz = factorized_term(src, d, dphi);
    worst = std::max(worst, std::abs(o - fz) / 2.0);
    const auto exact = gamma_pump(src.pump, d.delta_tau).value() *
                       gamma_prime(src.phase_matching, d.delta_tau_prime, d.delta_tau_dprime).value();
    worst_pointwise = std::max(worst_pointwise, std::abs(engine.integral(d) - exact) / std::abs(exact));
  }

  cfg.coupling = PumpCoupling::linear_shift(1.0);
  const std::vector<double> ratios = {1, 0.3, 0.1, 0.03, 0.01};
  const auto sweep_rows = factorization_error_sweep(src, delays, ratios, dphi, cfg, threads());
  bool monotone = true;
  std::string errs;
  for (std::size_t i = 0; i < sweep_rows.size(); ++i) {
    errs += fmt("%s%.2e", i ? ", " : "", sweep_rows[i].max_error);
    if (i > 0 && sweep_rows[i].max_error > sweep_rows[i - 1].max_error + 1e-6) monotone = false;
  }
  return {worst < 1e-5 && monotone,
          fmt("uncoupled max |oracle - factorized|/baseline = %.2e (pointwise complex rel %.2e); "
              "coupled errors over ratios {1,0.3,0.1,0.03,0.01} = [%s], monotone = %s",
              worst, worst_pointwise, errs.c_str(), monotone ? "yes" : "no")};
}

// 5. The three third-order parameterizations give the same rate.
Outcome criterion5() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lam(700e-9, 1600e-9), rho(-0.8, 0.8), w(5e12, 5e13);
  double worst_rel = 0, worst_base = 0;
  bool dl_exact = true;
  for (int i = 0; i < 100; ++i) {
    const auto f = CentralFrequencies::from_wavelengths(lam(rng), lam(rng), lam(rng));
    const auto pm = (i % 2 == 0)
                        ? JointSpectralDensity::correlated_gaussian(w(rng), w(rng), rho(rng), 0, 0)
                        : JointSpectralDensity::separable(SpectralDensity::gaussian(w(rng)),
                                                          SpectralDensity::lorentzian(w(rng)));
    const auto src = SourceModel::topdc(f, SpectralDensity::gaussian(w(rng)), pm);
    const auto p = random_path(rng, 50e-6);
    const auto amps = AlternativeAmplitudes::equal(1.0);
    const auto r1 = reduce_topdc(p, TopdcChoice::One);
    const auto rate1 = rate_length(src, r1, amps);
    for (auto c : {TopdcChoice::Two, TopdcChoice::Three}) {
      const auto rc = reduce_topdc(p, c);
      if (rc.delta_L != r1.delta_L) dl_exact = false;
      const double diff = std::abs(rate_length(src, rc, amps).rate - rate1.rate);
      worst_base = std::max(worst_base, diff / rate1.baseline);
      if (rate1.rate > 1e-3) worst_rel = std::max(worst_rel, diff / rate1.rate);
    }
  }
  return {worst_rel < 1e-12 && dl_exact,
          fmt("max relative rate difference = %.2e (baseline-relative %.2e), delta_L identical = %s",
              worst_rel, worst_base, dl_exact ? "yes" : "no")};
}

// 6. Frequency maps: round trips and Jacobians.
Outcome criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1e14, 1e14);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const Triple v{u(rng), u(rng), u(rng)};
    const double scale = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
    for (const auto& [fwd, inv] :
         {std::pair{cpdc_forward, cpdc_inverse}, std::pair{topdc_forward, topdc_inverse}}) {
      const Triple a = inv(fwd(v)), b = fwd(inv(v));
      for (int k = 0; k < 3; ++k)
        worst = std::max({worst, std::abs(a[k] - v[k]) / scale, std::abs(b[k] - v[k]) / scale});
    }
  }
  // Central-difference Jacobian of each forward map.
  auto jac_det = [](Triple (*fwd)(const Triple&)) {
    const double h = 0.5, x0 = 1.0;
    double J[3][3];
    for (int c = 0; c < 3; ++c) {
      Triple lo{x0, x0, x0}, hi{x0, x0, x0};
      lo[c] -= h;
      hi[c] += h;
      const Triple fl = fwd(lo), fh = fwd(hi);
      for (int r = 0; r < 3; ++r) J[r][c] = (fh[r] - fl[r]) / (2 * h);
    }
    return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
           J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
           J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
  };
  const double dc = std::abs(jac_det(cpdc_forward)), dt = std::abs(jac_det(topdc_forward));
  const bool ok = worst <= 1e-12 && std::abs(dc - 0.25) <= 1e-12 && std::abs(dt - 4.0 / 9.0) <= 1e-12;
  return {ok, fmt("max round-trip error = %.2e, |J_cpdc| = %.15f, |J_topdc| = %.15f", worst, dc, dt)};
}

// 7. Coherence kernels: closed form against quadrature, and bounds.
Outcome criterion7() {
  const CoherenceOptions quad{CoherenceMethod::Quadrature};
  double worst = 0;
  for (const auto& d : {SpectralDensity::gaussian(1.0), SpectralDensity::gaussian(2e13, 3e12),
                        SpectralDensity::lorentzian(1.0), SpectralDensity::lorentzian(5e12, -1e12)}) {
    const double w = d.characteristic_width();
    for (int i = -500; i <= 500; ++i) {
      const double t = 0.01 * i / w;
      const auto exact = gamma_pump(d, t).value();
      const auto q = gamma_pump(d, t, quad).value();
      worst = std::max(worst, std::abs(q - exact) / std::abs(exact));
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  double zero_err = 0, excess = 0;
  for (int i = 0; i < 1000; ++i) {
    SpectralDensity d = SpectralDensity::gaussian(1.0);
    const double w = 0.1 + 5 * u(rng), off = 4 * (u(rng) - 0.5);
    switch (i % 4) {
      case 0: d = SpectralDensity::gaussian(w, off); break;
      case 1: d = SpectralDensity::lorentzian(w, off); break;
      case 2: d = SpectralDensity::sinc_squared(w, off); break;
      default: {
        std::vector<double> g, v;
        for (int k = 0; k < 12; ++k) {
          g.push_back(-3 + 0.5 * k + 0.2 * u(rng));
          v.push_back(k == 0 || k == 11 ? 0.0 : u(rng));
        }
        d = normalize(SpectralDensity::tabulated(g, v, off));
      }
    }
    const double t = 20 * (u(rng) - 0.5) / w;
    const auto z = gamma_pump(d, 0.0, quad);
    zero_err = std::max(zero_err, std::abs(z.value() - 1.0));
    excess = std::max(excess, gamma_pump(d, t, quad).magnitude - 1.0);
  }
  const bool ok = worst <= 1e-7 && zero_err <= 1e-9 && excess <= 1e-12;
  return {ok, fmt("max closed-form vs quadrature rel error = %.2e, max |gamma(0) - 1| = %.2e, "
                  "max(|gamma| - 1) = %.2e",
                  worst, zero_err, excess)};
}

// 8. Reductions are linear and blind to a common length offset.
Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(-3, 3), shift(-0.5, 0.5);
  double lin = 0, inv = 0;
  auto all = [](const PathConfiguration& p) {
    std::vector<ReducedParameters> r{reduce_cpdc(p)};
    for (auto c : {TopdcChoice::One, TopdcChoice::Two, TopdcChoice::Three}) r.push_back(reduce_topdc(p, c));
    return r;
  };
  auto lengths = [](const ReducedParameters& r) {
    return std::array<double, 4>{r.delta_L, r.delta_L_prime, r.delta_L_dprime, r.delta_phi};
  };
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_path(rng, 1.0), q = random_path(rng, 1.0);
    const double a = coef(rng), b = coef(rng), s = shift(rng);
    PathConfiguration mix, shifted = p;
    double* pm[] = {&mix.l_a1, &mix.l_b1, &mix.l_c1, &mix.l_p1, &mix.l_a2, &mix.l_b2, &mix.l_c2, &mix.l_p2,
                    &mix.phi_a1, &mix.phi_b1, &mix.phi_c1, &mix.phi_p1, &mix.phi_a2, &mix.phi_b2, &mix.phi_c2, &mix.phi_p2};
    const double* pp[] = {&p.l_a1, &p.l_b1, &p.l_c1, &p.l_p1, &p.l_a2, &p.l_b2, &p.l_c2, &p.l_p2,
                          &p.phi_a1, &p.phi_b1, &p.phi_c1, &p.phi_p1, &p.phi_a2, &p.phi_b2, &p.phi_c2, &p.phi_p2};
    const double* pq[] = {&q.l_a1, &q.l_b1, &q.l_c1, &q.l_p1, &q.l_a2, &q.l_b2, &q.l_c2, &q.l_p2,
                          &q.phi_a1, &q.phi_b1, &q.phi_c1, &q.phi_p1, &q.phi_a2, &q.phi_b2, &q.phi_c2, &q.phi_p2};
    for (int k = 0; k < 16; ++k) *pm[k] = a * *pp[k] + b * *pq[k];
    for (double* l : {&shifted.l_a1, &shifted.l_b1, &shifted.l_c1, &shifted.l_p1, &shifted.l_a2,
                      &shifted.l_b2, &shifted.l_c2, &shifted.l_p2})
      *l += s;
    const auto rp = all(p), rq = all(q), rm = all(mix), rs = all(shifted);
    for (std::size_t j = 0; j < rp.size(); ++j) {
      const auto lp = lengths(rp[j]), lq = lengths(rq[j]), lm = lengths(rm[j]), ls = lengths(rs[j]);
      for (int k = 0; k < 4; ++k) {
        const double scale = std::abs(a) * 10 + std::abs(b) * 10 + 1;
        lin = std::max(lin, std::abs(lm[k] - (a * lp[k] + b * lq[k])) / scale);
        if (k < 3) inv = std::max(inv, std::abs(ls[k] - lp[k]));
      }
    }
  }
  return {lin <= 1e-12 && inv <= 1e-12,
          fmt("max linearity residual = %.2e, max shift change = %.2e", lin, inv)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"1 phase fringe at zero path differences", criterion1},
      {"2 pump fringe period and envelope", criterion2},
      {"3 asymmetry dip and hump", criterion3},
      {"4 factorization oracle", criterion4},
      {"5 third-order parameterization equivalence", criterion5},
      {"6 frequency transform identities", criterion6},
      {"7 coherence kernel cross-validation", criterion7},
      {"8 reduction linearity and shift invariance", criterion8}};
  const double budget[] = {1, 5, 5, 60, 60, 60, 60, 60};
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < budget[i];
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", checks[i].first,
                o.detail.c_str(), secs, in_time ? "" : ", over time budget");
    std::fflush(stdout);
  }
  return failures;
}
