#pragma once

// Flat `key = value` run configuration with dotted section prefixes and `#`
// comments. Units on input: wavelengths in nm, spectral widths and offsets
// in rad/s, lengths in m, phases in rad.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tpi/experiments.hpp"
#include "tpi/oracle.hpp"

namespace tpi {

struct SweepSettings {
  SweepVariable variable = SweepVariable::DeltaPhi;
  double start = 0;
  double stop = 0;
  std::size_t n_points = 0;
};

struct ValidateSettings {
  OracleConfig oracle;
  /// Pump-to-asymmetry bandwidth ratios; empty means use the pump as given.
  std::vector<double> ratios;
  std::size_t delay_points = 3;  // per axis
  double delay_span = 2.0;       // in inverse prime-marginal widths
};

struct RunConfig {
  SourceModel source;
  /// Set when the eight-length form was given.
  std::optional<PathConfiguration> path;
  ReducedParameters reduced;  // carriers attached
  AlternativeAmplitudes amps;
  std::optional<SweepSettings> sweep;
  ValidateSettings validate;
  std::filesystem::path output_directory = "out";
  int precision = 12;
  /// Hash of the raw configuration text (FNV-1a, 64-bit, hex).
  std::string config_hash;
};

/// Throws ParseError (with line and key) on malformed text and
/// ValidationError naming the key on invariant violations. Tabulated
/// density files are resolved against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

RunConfig load_config(const std::filesystem::path& file);

std::string fnv1a_hex(const std::string& text);

}  // namespace tpi
