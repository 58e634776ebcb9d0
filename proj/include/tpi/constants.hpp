#pragma once

#include <numbers>

namespace tpi {

/// Vacuum speed of light [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency [rad/s] of light with the given vacuum wavelength [m].
constexpr double angular_frequency_from_wavelength(double wavelength_m) {
  return kTwoPi * kSpeedOfLight / wavelength_m;
}

}  // namespace tpi
