#pragma once

// Time-averaged three-fold coincidence rate of two interfering alternatives:
//   R = |c|^2 [ K1^2 + K2^2 + 2 K1 K2 |gamma| |gamma'| cos(arg) ]
// with arg = carrier phase + dphi - arg(gamma) - arg(gamma').

#include "tpi/coherence.hpp"
#include "tpi/pathgeom.hpp"
#include "tpi/source.hpp"

namespace tpi {

struct AlternativeAmplitudes {
  double K1_mag = 1.0;
  double K2_mag = 1.0;
  double c_mag_sq = 0.5;

  /// Equal alternatives with overall scale C, i.e. |c K|^2 = C/2.
  static AlternativeAmplitudes equal(double C = 1.0) { return {1.0, 1.0, 0.5 * C}; }
  /// Throws std::invalid_argument on negative or non-finite values.
  void validate() const;
};

struct RateResult {
  double rate = 0;
  double gamma_mag = 1;
  double gamma_prime_mag = 1;
  double cosine_argument = 0;  // rad, includes the coherence phases
  double visibility_bound = 0;
  double baseline = 0;  // |c|^2 (K1^2 + K2^2)
  double gamma_phase = 0;
  double gamma_prime_phase = 0;
};

/// Baseline-times-visibility form. Delays in seconds; the asymmetry delays
/// are those of `choice` for third-order sources.
RateResult rate_time(const SourceModel& source, const DelayTriple& delays, double delta_phi,
                     const AlternativeAmplitudes& amps, TopdcChoice choice = TopdcChoice::One,
                     const CoherenceOptions& opts = {});

/// Same rate from path-length differences; the carrier phase is k * L with
/// wave numbers taken from the source and `lengths.choice`.
RateResult rate_length(const SourceModel& source, const ReducedParameters& lengths,
                       const AlternativeAmplitudes& amps, const CoherenceOptions& opts = {});

/// Bracket form with unequal amplitudes.
RateResult rate_general(const SourceModel& source, const DelayTriple& delays, double delta_phi,
                        const AlternativeAmplitudes& amps,
                        TopdcChoice choice = TopdcChoice::One,
                        const CoherenceOptions& opts = {});

}  // namespace tpi
