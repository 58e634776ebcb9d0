#pragma once

// Parameter sweeps over one reduced quantity, and the observables read off
// them: fringe visibility and period, envelope width, dip/hump depth and
// width.

#include <cstddef>
#include <string>
#include <vector>

#include "tpi/rates.hpp"

namespace tpi {

enum class SweepVariable { DeltaPhi, DeltaL, DeltaLPrime, DeltaLDPrime, Diagonal };

/// Column label used in CSV output ("delta_phi", "delta_L", ...).
std::string to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::DeltaPhi;
  double start = 0;  // rad or m
  double stop = 1;
  std::size_t n_points = 3;
  ReducedParameters fixed;  // lengths, phase and choice of the unswept quantities
  SourceModel source;
  AlternativeAmplitudes amps;
  CoherenceOptions coherence;

  void validate() const;
};

struct SweepRow {
  double parameter_value;
  RateResult result;
};

using SweepTable = std::vector<SweepRow>;

/// Rows are evaluated on `threads` workers and returned in ascending order.
/// On failure the error of the lowest failing row is rethrown; integration
/// errors carry that row index.
SweepTable run_sweep(const SweepSpec& spec, std::size_t threads = 1);

struct FringeMetrics {
  double visibility;
  double period;
  /// Distance from zero at which the fringe visibility falls to 1/e of its
  /// value at zero; infinity when the scan never gets there.
  double envelope_halfwidth;
};

/// Throws InsufficientSampling unless the scan covers at least three
/// fringe periods with at least 16 points per period.
FringeMetrics extract_fringe_metrics(const SweepTable& table);

enum class Extremum { Dip, Hump };

struct DipMetrics {
  Extremum extremum_kind;
  double depth;  // |1 - R(0) / baseline|
  double fwhm_prime;
  double fwhm_dprime;
  /// A side lobe of |R - baseline| exceeds 5% of the central deviation.
  bool not_monotone = false;
};

/// Both scans must contain the origin. Each width is the full width at half
/// of the central deviation from the baseline; infinity if not reached.
DipMetrics extract_dip_metrics(const SweepTable& table_prime, const SweepTable& table_dprime);

/// Central frequencies with vanishing asymmetry carriers for a pump
/// wavelength in meters: a at half the pump frequency and b, c at a quarter
/// for cascaded sources, equal thirds for third-order sources.
CentralFrequencies degenerate_frequencies(SourceKind kind, double pump_wavelength);

}  // namespace tpi
