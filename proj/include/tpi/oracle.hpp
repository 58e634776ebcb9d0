#pragma once

// Brute-force check of the factorized rate: the interference term as a
// direct trapezoid sum over (pump, prime, double-prime) detunings, with an
// optional dependence of the asymmetry density on the pump detuning.

#include <complex>
#include <cstddef>
#include <vector>

#include "tpi/coherence.hpp"
#include "tpi/source.hpp"

namespace tpi {

struct PumpCoupling {
  enum class Kind { None, LinearShift } kind = Kind::None;
  /// The prime-axis center moves by slope * pump detuning.
  double slope = 0.0;

  static PumpCoupling none() { return {}; }
  static PumpCoupling linear_shift(double slope) { return {Kind::LinearShift, slope}; }
};

struct OracleConfig {
  std::size_t n_pump = 128;
  std::size_t n_prime = 128;
  std::size_t n_dprime = 128;
  double support_multiplier = 8.0;
  PumpCoupling coupling;
  TopdcChoice choice = TopdcChoice::One;
  /// Also evaluate on a grid doubled in every dimension and report the change.
  bool check_refinement = false;

  /// Throws std::invalid_argument for grids below 32 or multipliers below 4.
  void validate() const;
};

struct OracleTerm {
  /// 2 Re{ e^{-i(dphi + carrier)} I }, in units of the per-alternative rate.
  double term = 0;
  /// The raw triple integral I.
  std::complex<double> integral;
  /// |term(doubled grid) - term| / 2 when check_refinement is set.
  double refinement_change = 0;
  /// Set when refinement_change exceeds kRefinementThreshold.
  bool grid_too_coarse = false;
};

inline constexpr double kRefinementThreshold = 1e-4;

/// Precomputed weighted density tensor; evaluate() is cheap per delay.
class OracleEngine {
 public:
  OracleEngine(const SourceModel& source, const OracleConfig& cfg);

  std::complex<double> integral(const DelayTriple& delays) const;
  double term(const DelayTriple& delays, double delta_phi) const;

  const std::vector<double>& pump_grid() const { return p_; }
  const std::vector<double>& prime_grid() const { return x_; }
  const std::vector<double>& dprime_grid() const { return y_; }

 private:
  Carriers carriers_;
  std::vector<double> p_, x_, y_;
  std::vector<double> w_;  // density times trapezoid weights, [p][x][y]
};

OracleTerm interference_term_3d(const SourceModel& source, const DelayTriple& delays,
                                double delta_phi, const OracleConfig& cfg);

/// 2 |gamma| |gamma'| cos(arg) from the factorized engine.
double factorized_term(const SourceModel& source, const DelayTriple& delays, double delta_phi,
                       TopdcChoice choice = TopdcChoice::One);

struct FactorizationRow {
  double ratio;
  DelayTriple delays;
  double factorized;
  double oracle;
  double rel_error;  // |factorized - oracle| / baseline, baseline = 2
};

struct FactorizationError {
  double ratio;
  double max_error;
  std::vector<FactorizationRow> rows;
};

/// For each ratio the pump is rescaled to ratio * (prime marginal width)
/// and the oracle is compared with the factorized term at every delay.
std::vector<FactorizationError> factorization_error_sweep(const SourceModel& source,
                                                          const std::vector<DelayTriple>& delays,
                                                          const std::vector<double>& ratios,
                                                          double delta_phi,
                                                          const OracleConfig& cfg,
                                                          std::size_t threads = 1);

}  // namespace tpi
