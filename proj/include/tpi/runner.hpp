#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "tpi/config.hpp"

namespace tpi {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::filesystem::path output_directory;  // overrides the config when set
  std::size_t threads = 1;
};

/// Writes sweep.csv, metrics.csv and run_meta.json.
void run_sweep_command(const RunConfig& cfg, const RunOptions& opts);

/// Writes validate.csv, validate_summary.csv and run_meta.json.
void run_validate_command(const RunConfig& cfg, const RunOptions& opts);

/// Prints the reduced parameters as pasteable config lines to `out`, and
/// writes run_meta.json when an output directory is given.
void run_reduce_command(const RunConfig& cfg, const RunOptions& opts, std::ostream& out);

/// Delay grid used by `validate`: `points` values per axis spread over
/// +/- span / (prime marginal width), full tensor product.
std::vector<DelayTriple> validation_delays(const SourceModel& source, TopdcChoice choice,
                                           std::size_t points, double span);

}  // namespace tpi
