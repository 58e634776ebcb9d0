#include "tpi/source.hpp"

namespace tpi {

SourceModel SourceModel::cpdc(CentralFrequencies f, SpectralDensity pump, JointSpectralDensity pm) {
  f.validate();
  return {SourceKind::Cpdc, f, normalize(pump), normalize(pm)};
}

SourceModel SourceModel::topdc(CentralFrequencies f, SpectralDensity pump,
                               JointSpectralDensity pm) {
  f.validate();
  return {SourceKind::Topdc, f, normalize(pump), normalize(pm)};
}

JointSpectralDensity SourceModel::phase_matching_for(TopdcChoice choice) const {
  if (kind == SourceKind::Cpdc || choice == TopdcChoice::One) return phase_matching;
  return remap(phase_matching, choice_map(choice));
}

Carriers SourceModel::carriers(TopdcChoice choice) const {
  return carrier_frequencies(centrals, kind, choice);
}

}  // namespace tpi
