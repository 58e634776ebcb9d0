#include "tpi/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tpi {

void AlternativeAmplitudes::validate() const {
  for (double v : {K1_mag, K2_mag}) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("amplitudes must be >= 0");
  }
  if (!(c_mag_sq > 0.0) || !std::isfinite(c_mag_sq))
    throw std::invalid_argument("|c|^2 must be positive");
}

namespace {

enum class Form { Visibility, Bracket };

RateResult assemble(const SourceModel& source, const DelayTriple& delays, double carrier_phase,
                    double delta_phi, const AlternativeAmplitudes& amps, TopdcChoice choice,
                    const CoherenceOptions& opts, Form form) {
  amps.validate();
  const CoherenceValue g = gamma_pump(source.pump, delays.delta_tau, opts);
  const CoherenceValue gp = gamma_prime(source.phase_matching_for(choice),
                                        delays.delta_tau_prime, delays.delta_tau_dprime, opts);
  RateResult r;
  r.gamma_mag = g.magnitude;
  r.gamma_phase = g.phase;
  r.gamma_prime_mag = gp.magnitude;
  r.gamma_prime_phase = gp.phase;
  r.cosine_argument = carrier_phase + delta_phi - g.phase - gp.phase;

  const double k1 = amps.K1_mag, k2 = amps.K2_mag;
  const double sum_sq = k1 * k1 + k2 * k2;
  r.baseline = amps.c_mag_sq * sum_sq;
  const double coherence = g.magnitude * gp.magnitude;
  r.visibility_bound = sum_sq > 0.0 ? 2.0 * k1 * k2 / sum_sq * coherence : 0.0;
  const double c = std::cos(r.cosine_argument);
  if (form == Form::Visibility) {
    r.rate = r.baseline * (1.0 + r.visibility_bound * c);
  } else {
    r.rate = amps.c_mag_sq * (sum_sq + 2.0 * k1 * k2 * coherence * c);
  }
  // Only roundoff can push the rate below zero.
  r.rate = std::max(r.rate, 0.0);
  return r;
}

double time_carrier_phase(const SourceModel& source, const DelayTriple& d, TopdcChoice choice) {
  const Carriers w = source.carriers(choice);
  return w.pump * d.delta_tau + w.prime * d.delta_tau_prime + w.dprime * d.delta_tau_dprime;
}

}  // namespace

RateResult rate_time(const SourceModel& source, const DelayTriple& delays, double delta_phi,
                     const AlternativeAmplitudes& amps, TopdcChoice choice,
                     const CoherenceOptions& opts) {
  return assemble(source, delays, time_carrier_phase(source, delays, choice), delta_phi, amps,
                  choice, opts, Form::Visibility);
}

RateResult rate_general(const SourceModel& source, const DelayTriple& delays, double delta_phi,
                        const AlternativeAmplitudes& amps, TopdcChoice choice,
                        const CoherenceOptions& opts) {
  return assemble(source, delays, time_carrier_phase(source, delays, choice), delta_phi, amps,
                  choice, opts, Form::Bracket);
}

RateResult rate_length(const SourceModel& source, const ReducedParameters& lengths,
                       const AlternativeAmplitudes& amps, const CoherenceOptions& opts) {
  const ReducedParameters r = attach_carriers(lengths, source.centrals, source.kind);
  const double carrier = r.k_p0 * r.delta_L + r.k0_prime * r.delta_L_prime +
                         r.k0_dprime * r.delta_L_dprime;
  const DelayTriple delays =
      DelayTriple::from_lengths(r.delta_L, r.delta_L_prime, r.delta_L_dprime);
  return assemble(source, delays, carrier, r.delta_phi, amps, r.choice, opts, Form::Visibility);
}

}  // namespace tpi
