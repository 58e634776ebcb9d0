#pragma once

// Two-alternative path geometry: eight optical path lengths and eight
// phases, reduced to one overall path difference, two asymmetry
// differences and one phase difference.

#include <array>

#include "tpi/spectra.hpp"

namespace tpi {

enum class SourceKind { Cpdc, Topdc };

/// Which photon acts as the reference in the three-photon asymmetry
/// lengths. All three give the same rate.
enum class TopdcChoice { One = 1, Two = 2, Three = 3 };

struct PathConfiguration {
  double l_a1 = 0, l_b1 = 0, l_c1 = 0, l_p1 = 0;  // m
  double l_a2 = 0, l_b2 = 0, l_c2 = 0, l_p2 = 0;
  double phi_a1 = 0, phi_b1 = 0, phi_c1 = 0, phi_p1 = 0;  // rad, unwrapped
  double phi_a2 = 0, phi_b2 = 0, phi_c2 = 0, phi_p2 = 0;

  /// Throws std::invalid_argument on negative or non-finite entries.
  void validate() const;
};

struct CentralFrequencies {
  double omega_a0 = 0, omega_b0 = 0, omega_c0 = 0;  // rad/s
  double omega_p0() const { return omega_a0 + omega_b0 + omega_c0; }

  /// Wavelengths in meters.
  static CentralFrequencies from_wavelengths(double lambda_a, double lambda_b, double lambda_c);
  void validate() const;
};

/// Carrier combinations multiplying the three delays (or lengths) in the
/// cosine argument. Same layout for frequencies and wave numbers.
struct Carriers {
  double pump = 0;
  double prime = 0;
  double dprime = 0;
};

struct ReducedParameters {
  double delta_L = 0;         // m
  double delta_L_prime = 0;   // m
  double delta_L_dprime = 0;  // m
  double delta_phi = 0;       // rad
  /// Wave numbers k_p0, k0', k0'' [rad/m]; zero until attach_carriers().
  double k_p0 = 0, k0_prime = 0, k0_dprime = 0;
  TopdcChoice choice = TopdcChoice::One;
};

ReducedParameters reduce_cpdc(const PathConfiguration& p);
ReducedParameters reduce_topdc(const PathConfiguration& p, TopdcChoice choice = TopdcChoice::One);
ReducedParameters reduce(const PathConfiguration& p, SourceKind kind,
                         TopdcChoice choice = TopdcChoice::One);

Carriers carrier_frequencies(const CentralFrequencies& f, SourceKind kind,
                             TopdcChoice choice = TopdcChoice::One);
Carriers carrier_wavenumbers(const CentralFrequencies& f, SourceKind kind,
                             TopdcChoice choice = TopdcChoice::One);

/// Copy of `r` with k_p0, k0', k0'' filled in for its choice.
ReducedParameters attach_carriers(ReducedParameters r, const CentralFrequencies& f,
                                  SourceKind kind);

/// k_p0 dL + k0' dL' + k0'' dL'' + dphi from stored carriers.
double cosine_argument(const ReducedParameters& r);

/// Photon frequencies from (omega_p, omega', omega'') and back.
using Triple = std::array<double, 3>;
Triple cpdc_forward(const Triple& pump_prime_dprime);
Triple cpdc_inverse(const Triple& abc);
Triple topdc_forward(const Triple& pump_prime_dprime);
Triple topdc_inverse(const Triple& abc);

/// Coefficient matrices of the forward maps, rows = (a, b, c).
using Matrix3 = std::array<std::array<double, 3>, 3>;
Matrix3 cpdc_forward_matrix();
Matrix3 topdc_forward_matrix();

/// Map from choice-1 asymmetry detunings to those of `choice`. The
/// asymmetry coherence transforms as gamma_k(d) = gamma_1(M^T d).
Matrix2 choice_map(TopdcChoice choice);

}  // namespace tpi
