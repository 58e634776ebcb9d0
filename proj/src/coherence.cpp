#include "tpi/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "tpi/constants.hpp"
#include "tpi/errors.hpp"
#include "tpi/quadrature.hpp"

namespace tpi {

using Complex = std::complex<double>;

DelayTriple DelayTriple::from_lengths(double dL, double dL_prime, double dL_dprime) {
  return {dL / kSpeedOfLight, dL_prime / kSpeedOfLight, dL_dprime / kSpeedOfLight};
}

namespace {

Complex phasor(double angle) { return {std::cos(angle), -std::sin(angle)}; }  // e^{-i angle}

std::optional<Complex> closed_form(const SpectralDensity& d, double tau) {
  const Complex shift = phasor(d.center_offset() * tau);
  if (const auto* g = std::get_if<Gaussian>(&d.shape())) {
    const double s = g->sigma * tau;
    return std::exp(-0.5 * s * s) * shift;
  }
  if (const auto* l = std::get_if<Lorentzian>(&d.shape())) {
    return std::exp(-l->gamma * std::abs(tau)) * shift;
  }
  if (const auto* s = std::get_if<SincSquared>(&d.shape())) {
    return std::max(0.0, 1.0 - 0.5 * s->width * std::abs(tau)) * shift;
  }
  return std::nullopt;
}

[[noreturn]] void fail(const std::string& what, double error) {
  throw IntegrationError(what, error);
}

// Both tails |x| > X of w sin^2(x/w) / (pi x^2) e^{-i x tau}. Writing
// sin^2 = (1 - cos(2x/w)) / 2 leaves three single-frequency terms
// e^{-i k x} / x^2; a block sum of a term with k = 0 decays only like 1/m^2,
// which extrapolates poorly, but that term integrates to 1/X exactly.
Complex sinc_squared_tails(double w, double tau, double X, quad::TailOptions tail) {
  const double k[3] = {tau, tau - 2.0 / w, tau + 2.0 / w};
  const double c[3] = {1.0, -0.5, -0.5};
  Complex sum{};
  for (int j = 0; j < 3; ++j) {
    if (k[j] == 0.0) {
      sum += c[j] * (2.0 / X);
      continue;
    }
    const double kj = k[j];
    std::function<Complex(double)> f = [kj](double x) { return phasor(x * kj) / (x * x); };
    tail.block_length = kPi / std::abs(kj);
    tail.geometric = false;
    const auto right = quad::integrate_tail(f, X, +1, tail);
    const auto left = quad::integrate_tail(f, -X, -1, tail);
    if (!right.converged || !left.converged) {
      fail("coherence tail summation did not converge", right.abs_error + left.abs_error);
    }
    sum += c[j] * (right.value + left.value);
  }
  return w / (2.0 * kPi) * sum;
}

// Integral of d(c + x) exp(-i x tau) over the real line, c = center offset.
Complex quadrature_1d(const SpectralDensity& d, double tau, const CoherenceOptions& opts) {
  const double c = d.center_offset();
  auto integrand = [&d, c, tau](double x) -> Complex { return d(c + x) * phasor(x * tau); };
  const quad::Options qopts{opts.rel_tol, opts.abs_tol, 20000};
  const double period = tau != 0.0 ? kTwoPi / std::abs(tau) : INFINITY;

  if (const auto* t = std::get_if<Tabulated>(&d.shape())) {
    std::vector<quad::Interval> seeds;
    for (std::size_t i = 0; i + 1 < t->grid.size(); ++i) {
      for (const auto& piece : quad::split(t->grid[i], t->grid[i + 1], period)) seeds.push_back(piece);
    }
    auto r = quad::integrate(std::function<Complex(double)>(integrand), seeds, qopts);
    if (!r.converged) fail("coherence quadrature did not converge", r.abs_error);
    return r.value;
  }

  const double w = d.characteristic_width();
  const double half = opts.window * w;
  // Offsets are measured from the peak, which coincides with c for the
  // analytic shapes.
  const auto seeds = quad::split(-half, half, std::min(2.0 * period, half));
  auto central = quad::integrate(std::function<Complex(double)>(integrand), seeds, qopts);
  if (!central.converged) fail("coherence quadrature did not converge", central.abs_error);

  quad::TailOptions tail;
  tail.abs_tol = std::max(1e-13, opts.abs_tol);
  if (const auto* s = std::get_if<SincSquared>(&d.shape())) {
    return central.value + sinc_squared_tails(s->width, tau, half, tail);
  }
  if (tau != 0.0) {
    tail.block_length = 0.5 * period;
  } else {
    tail.block_length = half;
    tail.geometric = true;
  }
  std::function<Complex(double)> f(integrand);
  auto right = quad::integrate_tail(f, half, +1, tail);
  auto left = quad::integrate_tail(f, -half, -1, tail);
  if (!right.converged || !left.converged) {
    fail("coherence tail summation did not converge", right.abs_error + left.abs_error);
  }
  return central.value + right.value + left.value;
}

Complex gamma_1d(const SpectralDensity& d, double tau, const CoherenceOptions& opts) {
  if (opts.method == CoherenceMethod::Auto) {
    if (auto z = closed_form(d, tau)) return *z;
  }
  return quadrature_1d(d, tau, opts) * phasor(d.center_offset() * tau);
}

// Integrals of the two hat-function halves on a cell [a, a + h] against
// exp(-i x t): returns (falling part at a, rising part at a + h).
std::pair<Complex, Complex> cell_weights(double a, double h, double t) {
  const double theta = t * h;
  Complex i0, i1;
  if (std::abs(theta) < 1e-2) {
    // Taylor series of int_0^1 e^{-i theta s} ds and int_0^1 s e^{-i theta s} ds.
    Complex term = 1.0;
    const Complex z{0.0, -theta};
    double fact = 1.0;
    for (int n = 0; n < 8; ++n) {
      if (n > 0) {
        term *= z;
        fact *= n;
      }
      i0 += term / (fact * (n + 1));
      i1 += term / (fact * (n + 2));
    }
  } else {
    const Complex e = phasor(theta);
    i0 = (1.0 - e) / Complex(0.0, theta);
    i1 = (e * Complex(1.0, theta) - 1.0) / (theta * theta);
  }
  const Complex scale = h * phasor(a * t);
  return {scale * (i0 - i1), scale * i1};
}

// Exact transform of the piecewise-linear interpolant along one axis:
// H_i(t) = int hat_i(x) exp(-i x t) dx.
std::vector<Complex> hat_transform(const std::vector<double>& grid, double t) {
  std::vector<Complex> h(grid.size());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto [lo, hi] = cell_weights(grid[i], grid[i + 1] - grid[i], t);
    h[i] += lo;
    h[i + 1] += hi;
  }
  return h;
}

Complex tabulated_2d(const Tabulated2D& t, double tp, double tdp) {
  const auto h1 = hat_transform(t.grid1, tp);
  const auto h2 = hat_transform(t.grid2, tdp);
  const std::size_t n2 = t.grid2.size();
  std::vector<Complex> rows(t.grid1.size());
  std::vector<Complex> buf(n2);
  for (std::size_t i = 0; i < t.grid1.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) buf[j] = t.values[i * n2 + j] * h2[j];
    rows[i] = h1[i] * quad::pairwise_sum(buf);
  }
  return quad::pairwise_sum(rows);
}

Complex correlated_closed(const CorrelatedGaussian& g, double tp, double tdp) {
  const double a = g.sigma_prime * tp, b = g.sigma_dprime * tdp;
  const double q = a * a + 2.0 * g.correlation * a * b + b * b;
  return std::exp(-0.5 * q) * phasor(g.center_prime * tp + g.center_dprime * tdp);
}

Complex iterated(const JointSpectralDensity& pm, double tp, double tdp,
                 const CoherenceOptions& opts) {
  const Box box = pm.support_box(opts.window);
  const quad::Options qopts{opts.rel_tol, opts.abs_tol, 20000};
  auto seeds_for = [](double lo, double hi, double t, const std::vector<double>* grid) {
    const double period = t != 0.0 ? kTwoPi / std::abs(t) : INFINITY;
    std::vector<quad::Interval> seeds;
    if (grid != nullptr) {
      for (std::size_t i = 0; i + 1 < grid->size(); ++i) {
        for (const auto& p : quad::split((*grid)[i], (*grid)[i + 1], period)) seeds.push_back(p);
      }
    } else {
      seeds = quad::split(lo, hi, std::min(2.0 * period, (hi - lo) / 4.0));
    }
    return seeds;
  };
  const auto* tab = std::get_if<Tabulated2D>(&pm.kind());
  const auto outer_seeds = seeds_for(box.lo1, box.hi1, tp, tab ? &tab->grid1 : nullptr);
  const auto inner_seeds = seeds_for(box.lo2, box.hi2, tdp, tab ? &tab->grid2 : nullptr);

  double worst = 0.0;
  bool ok = true;
  std::function<Complex(double)> outer = [&](double x) -> Complex {
    std::function<Complex(double)> inner = [&](double y) -> Complex {
      return pm(x, y) * phasor(y * tdp);
    };
    auto r = quad::integrate(inner, inner_seeds, qopts);
    ok = ok && r.converged;
    worst = std::max(worst, r.abs_error);
    return r.value * phasor(x * tp);
  };
  auto r = quad::integrate(outer, outer_seeds, qopts);
  if (!r.converged || !ok) fail("iterated coherence quadrature did not converge", r.abs_error + worst);
  return r.value;
}

Complex gamma_2d(const JointSpectralDensity& pm, double tp, double tdp,
                 const CoherenceOptions& opts) {
  if (const auto* s = std::get_if<Separable>(&pm.kind())) {
    return gamma_1d(s->first, tp, opts) * gamma_1d(s->second, tdp, opts);
  }
  if (const auto* g = std::get_if<CorrelatedGaussian>(&pm.kind())) {
    if (opts.method == CoherenceMethod::Auto) return correlated_closed(*g, tp, tdp);
    return iterated(pm, tp, tdp, opts);
  }
  if (const auto* t = std::get_if<Tabulated2D>(&pm.kind())) return tabulated_2d(*t, tp, tdp);
  const auto& r = std::get<Remapped>(pm.kind());
  const auto d = r.map.transposed().apply(tp, tdp);
  return gamma_2d(*r.base, d[0], d[1], opts);
}

}  // namespace

CoherenceValue gamma_pump(const SpectralDensity& pump, double delta_tau,
                          const CoherenceOptions& opts) {
  return CoherenceValue::from_complex(gamma_1d(pump, delta_tau, opts));
}

CoherenceValue gamma_prime(const JointSpectralDensity& pm, double delta_tau_prime,
                           double delta_tau_dprime, const CoherenceOptions& opts) {
  return CoherenceValue::from_complex(gamma_2d(pm, delta_tau_prime, delta_tau_dprime, opts));
}

CoherenceValue gamma_prime_iterated(const JointSpectralDensity& pm, double delta_tau_prime,
                                    double delta_tau_dprime, const CoherenceOptions& opts) {
  return CoherenceValue::from_complex(iterated(pm, delta_tau_prime, delta_tau_dprime, opts));
}

CoherenceSurface coherence_surface(const JointSpectralDensity& pm,
                                   const std::vector<double>& grid_prime,
                                   const std::vector<double>& grid_dprime,
                                   const CoherenceOptions& opts, std::size_t threads) {
  for (const auto* g : {&grid_prime, &grid_dprime}) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (!std::isfinite((*g)[i]) || (i > 0 && (*g)[i] < (*g)[i - 1]))
        throw std::invalid_argument("coherence_surface: grids must be finite and sorted");
    }
  }
  const std::size_t n1 = grid_prime.size(), n2 = grid_dprime.size();
  CoherenceSurface out(n1, std::vector<CoherenceValue>(n2));
  auto failures = detail::parallel_for(n1 * n2, threads, [&](std::size_t k) {
    const std::size_t i = k / n2, j = k % n2;
    out[i][j] = gamma_prime(pm, grid_prime[i], grid_dprime[j], opts);
  });
  if (!failures.empty()) {
    const std::size_t k = failures.front().index;
    try {
      std::rethrow_exception(failures.front().error);
    } catch (const IntegrationError& e) {
      throw IntegrationError(e.what(), e.error_estimate(), k / n2, k % n2);
    }
  }
  return out;
}

}  // namespace tpi
