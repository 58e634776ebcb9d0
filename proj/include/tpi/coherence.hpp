#pragma once

// Degrees of coherence: Fourier integrals of the unit-area pump density
// and of the joint asymmetry density,
//   gamma(t)      = int S(w) exp(-i w t) dw
//   gamma'(t, u)  = int int P(x, y) exp(-i (x t + y u)) dx dy

#include <complex>
#include <cstddef>
#include <vector>

#include "tpi/spectra.hpp"

namespace tpi {

struct CoherenceValue {
  double magnitude = 1.0;
  double phase = 0.0;  // rad

  std::complex<double> value() const { return std::polar(magnitude, phase); }
  static CoherenceValue from_complex(std::complex<double> z) { return {std::abs(z), std::arg(z)}; }
};

/// Delays in seconds.
struct DelayTriple {
  double delta_tau = 0;
  double delta_tau_prime = 0;
  double delta_tau_dprime = 0;

  static DelayTriple from_lengths(double dL, double dL_prime, double dL_dprime);
};

enum class CoherenceMethod {
  Auto,        // closed form when one exists, else quadrature
  Quadrature,  // always integrate numerically
};

struct CoherenceOptions {
  CoherenceMethod method = CoherenceMethod::Auto;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// Half-width of the central quadrature window in characteristic widths.
  double window = 8.0;
};

/// Throws IntegrationError when quadrature misses its tolerance.
CoherenceValue gamma_pump(const SpectralDensity& pump, double delta_tau,
                          const CoherenceOptions& opts = {});

/// Separable densities factor into two 1D transforms.
CoherenceValue gamma_prime(const JointSpectralDensity& pm, double delta_tau_prime,
                           double delta_tau_dprime, const CoherenceOptions& opts = {});

/// Brute-force iterated 2D quadrature over support_box(window); used to
/// cross-check the factored and closed-form paths.
CoherenceValue gamma_prime_iterated(const JointSpectralDensity& pm, double delta_tau_prime,
                                    double delta_tau_dprime, const CoherenceOptions& opts = {});

using CoherenceSurface = std::vector<std::vector<CoherenceValue>>;

/// Element (i, j) is gamma_prime(grid_prime[i], grid_dprime[j]). Cells are
/// split over `threads` workers; a failing cell rethrows IntegrationError
/// with its (row, col).
CoherenceSurface coherence_surface(const JointSpectralDensity& pm,
                                   const std::vector<double>& grid_prime,
                                   const std::vector<double>& grid_dprime,
                                   const CoherenceOptions& opts = {}, std::size_t threads = 1);

}  // namespace tpi
