#include "tpi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "tpi/quadrature.hpp"

namespace tpi {

using Complex = std::complex<double>;

void OracleConfig::validate() const {
  if (n_pump < 32 || n_prime < 32 || n_dprime < 32)
    throw std::invalid_argument("oracle grids need at least 32 points per axis");
  if (!(support_multiplier >= 4.0))
    throw std::invalid_argument("oracle support_multiplier must be >= 4");
  if (!std::isfinite(coupling.slope)) throw std::invalid_argument("coupling slope must be finite");
}

namespace {

std::vector<double> uniform(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = (i + 1 == n) ? hi : lo + h * static_cast<double>(i);
  return g;
}

std::vector<double> trapezoid_weights(const std::vector<double>& g) {
  const double h = g[1] - g[0];
  std::vector<double> w(g.size(), h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

}  // namespace

OracleEngine::OracleEngine(const SourceModel& source, const OracleConfig& cfg) {
  cfg.validate();
  carriers_ = source.carriers(cfg.choice);
  const SpectralDensity& pump = source.pump;
  const JointSpectralDensity pm = source.phase_matching_for(cfg.choice);
  const double m = cfg.support_multiplier;

  if (auto cs = pump.compact_support()) {
    p_ = uniform(cs->first, cs->second, cfg.n_pump);
  } else {
    p_ = uniform(pump.peak() - m * pump.characteristic_width(),
                 pump.peak() + m * pump.characteristic_width(), cfg.n_pump);
  }
  const double s =
      cfg.coupling.kind == PumpCoupling::Kind::LinearShift ? cfg.coupling.slope : 0.0;
  const Box box = pm.support_box(m);
  const double shift_lo = std::min(s * p_.front(), s * p_.back());
  const double shift_hi = std::max(s * p_.front(), s * p_.back());
  x_ = uniform(box.lo1 + shift_lo, box.hi1 + shift_hi, cfg.n_prime);
  y_ = uniform(box.lo2, box.hi2, cfg.n_dprime);

  const auto wp = trapezoid_weights(p_);
  const auto wx = trapezoid_weights(x_);
  const auto wy = trapezoid_weights(y_);
  const std::size_t np = p_.size(), nx = x_.size(), ny = y_.size();
  w_.resize(np * nx * ny);
  for (std::size_t i = 0; i < np; ++i) {
    const double fp = wp[i] * pump(p_[i]);
    for (std::size_t j = 0; j < nx; ++j) {
      const double fx = fp * wx[j];
      const double xs = x_[j] - s * p_[i];
      double* row = &w_[(i * nx + j) * ny];
      for (std::size_t k = 0; k < ny; ++k) row[k] = fx * wy[k] * pm(xs, y_[k]);
    }
  }
}

Complex OracleEngine::integral(const DelayTriple& d) const {
  const std::size_t np = p_.size(), nx = x_.size(), ny = y_.size();
  std::vector<double> cy(ny), sy(ny);
  for (std::size_t k = 0; k < ny; ++k) {
    cy[k] = std::cos(y_[k] * d.delta_tau_dprime);
    sy[k] = -std::sin(y_[k] * d.delta_tau_dprime);
  }
  std::vector<Complex> bx(nx), ap(np);
  for (std::size_t j = 0; j < nx; ++j) bx[j] = std::polar(1.0, -x_[j] * d.delta_tau_prime);
  for (std::size_t i = 0; i < np; ++i) ap[i] = std::polar(1.0, -p_[i] * d.delta_tau);

  std::vector<double> re(ny), im(ny);
  std::vector<Complex> inner(nx), outer(np);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nx; ++j) {
      const double* row = &w_[(i * nx + j) * ny];
      for (std::size_t k = 0; k < ny; ++k) {
        re[k] = row[k] * cy[k];
        im[k] = row[k] * sy[k];
      }
      inner[j] = bx[j] * Complex(quad::pairwise_sum(re), quad::pairwise_sum(im));
    }
    outer[i] = ap[i] * quad::pairwise_sum(inner);
  }
  return quad::pairwise_sum(outer);
}

double OracleEngine::term(const DelayTriple& d, double delta_phi) const {
  const double carrier = carriers_.pump * d.delta_tau + carriers_.prime * d.delta_tau_prime +
                         carriers_.dprime * d.delta_tau_dprime;
  return 2.0 * std::real(std::polar(1.0, -(delta_phi + carrier)) * integral(d));
}

OracleTerm interference_term_3d(const SourceModel& source, const DelayTriple& delays,
                                double delta_phi, const OracleConfig& cfg) {
  const OracleEngine engine(source, cfg);
  OracleTerm out;
  out.integral = engine.integral(delays);
  out.term = engine.term(delays, delta_phi);
  if (cfg.check_refinement) {
    OracleConfig fine = cfg;
    fine.check_refinement = false;
    fine.n_pump = 2 * cfg.n_pump - 1;
    fine.n_prime = 2 * cfg.n_prime - 1;
    fine.n_dprime = 2 * cfg.n_dprime - 1;
    const OracleEngine refined(source, fine);
    out.refinement_change = std::abs(refined.term(delays, delta_phi) - out.term) / 2.0;
    out.grid_too_coarse = out.refinement_change > kRefinementThreshold;
  }
  return out;
}

double factorized_term(const SourceModel& source, const DelayTriple& delays, double delta_phi,
                       TopdcChoice choice) {
  const Carriers w = source.carriers(choice);
  const CoherenceValue g = gamma_pump(source.pump, delays.delta_tau);
  const CoherenceValue gp = gamma_prime(source.phase_matching_for(choice),
                                        delays.delta_tau_prime, delays.delta_tau_dprime);
  const double arg = w.pump * delays.delta_tau + w.prime * delays.delta_tau_prime +
                     w.dprime * delays.delta_tau_dprime + delta_phi - g.phase - gp.phase;
  return 2.0 * g.magnitude * gp.magnitude * std::cos(arg);
}

std::vector<FactorizationError> factorization_error_sweep(const SourceModel& source,
                                                          const std::vector<DelayTriple>& delays,
                                                          const std::vector<double>& ratios,
                                                          double delta_phi,
                                                          const OracleConfig& cfg,
                                                          std::size_t threads) {
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ratios must be positive");
  }
  const double pm_width = source.phase_matching_for(cfg.choice).widths()[0];
  std::vector<FactorizationError> out;
  for (double ratio : ratios) {
    SourceModel scaled = source;
    scaled.pump = source.pump.scaled(ratio * pm_width / source.pump.characteristic_width());
    const OracleEngine engine(scaled, cfg);
    FactorizationError e{ratio, 0.0, std::vector<FactorizationRow>(delays.size())};
    auto failures = detail::parallel_for(delays.size(), threads, [&](std::size_t i) {
      const double f = factorized_term(scaled, delays[i], delta_phi, cfg.choice);
      const double o = engine.term(delays[i], delta_phi);
      e.rows[i] = {ratio, delays[i], f, o, std::abs(f - o) / 2.0};
    });
    if (!failures.empty()) std::rethrow_exception(failures.front().error);
    for (const auto& row : e.rows) e.max_error = std::max(e.max_error, row.rel_error);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace tpi
