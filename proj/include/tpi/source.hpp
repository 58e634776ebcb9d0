#pragma once

#include "tpi/pathgeom.hpp"
#include "tpi/spectra.hpp"

namespace tpi {

/// A three-photon source: central frequencies, pump density and the joint
/// density of the two asymmetry detunings. For the third-order source the
/// joint density is expressed in choice-1 detunings.
struct SourceModel {
  SourceKind kind = SourceKind::Cpdc;
  CentralFrequencies centrals;
  SpectralDensity pump;
  JointSpectralDensity phase_matching;

  static SourceModel cpdc(CentralFrequencies f, SpectralDensity pump, JointSpectralDensity pm);
  static SourceModel topdc(CentralFrequencies f, SpectralDensity pump, JointSpectralDensity pm);

  /// Joint density in the detunings conjugate to the asymmetry lengths of
  /// `choice` (identity for cascaded sources).
  JointSpectralDensity phase_matching_for(TopdcChoice choice) const;
  Carriers carriers(TopdcChoice choice = TopdcChoice::One) const;
};

}  // namespace tpi
