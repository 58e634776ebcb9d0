#pragma once

// Spectral power densities of the pump and of the phase matching.
//
// Analytic shapes are unit-area by construction. Tabulated densities are
// linearly interpolated between grid points, zero outside the grid, and must
// be passed through normalize() before they are used as coherence inputs.

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace tpi {

struct Gaussian {
  double sigma;  // rad/s
};

struct Lorentzian {
  double gamma;  // half width at half maximum, rad/s
};

/// sinc^2(w / width) with sinc(x) = sin(x)/x; first zero at pi * width.
struct SincSquared {
  double width;  // rad/s
};

struct Tabulated {
  std::vector<double> grid;    // rad/s, strictly increasing
  std::vector<double> values;  // >= 0
};

using DensityShape = std::variant<Gaussian, Lorentzian, SincSquared, Tabulated>;

class SpectralDensity {
 public:
  static SpectralDensity gaussian(double sigma, double center_offset = 0.0);
  static SpectralDensity lorentzian(double gamma, double center_offset = 0.0);
  static SpectralDensity sinc_squared(double width, double center_offset = 0.0);
  /// Throws std::invalid_argument for unsorted grids, size mismatches,
  /// fewer than two points or negative/non-finite values.
  static SpectralDensity tabulated(std::vector<double> grid, std::vector<double> values,
                                   double center_offset = 0.0);

  const DensityShape& shape() const noexcept { return shape_; }
  double center_offset() const noexcept { return center_offset_; }
  bool is_tabulated() const noexcept { return std::holds_alternative<Tabulated>(shape_); }

  double operator()(double detuning) const;

  /// Width used to size quadrature windows and sample grids: sigma, gamma,
  /// width, or the RMS width of a tabulated profile.
  double characteristic_width() const noexcept { return width_; }
  /// Location of the maximum (including the center offset).
  double peak() const noexcept { return peak_; }
  /// Support of a tabulated density; nullopt for analytic shapes.
  std::optional<std::pair<double, double>> compact_support() const;
  /// Period of oscillations intrinsic to the shape itself (sinc^2 only).
  std::optional<double> intrinsic_period() const;
  /// Integral over the real line (1 for analytic shapes).
  double total_mass() const;
  /// Integral over [lo, hi]; exact for tabulated, quadrature otherwise.
  double mass_between(double lo, double hi) const;

  SpectralDensity with_center_offset(double offset) const;
  /// Same shape family with the characteristic width multiplied by `factor`
  /// about the peak (grid spacing scaled for tabulated densities).
  SpectralDensity scaled(double factor) const;

 private:
  SpectralDensity(DensityShape shape, double center_offset);
  void refresh_summary();

  DensityShape shape_;
  double center_offset_ = 0.0;
  double width_ = 1.0;
  double peak_ = 0.0;
};

double evaluate(const SpectralDensity& d, double detuning);

/// Unit-area copy. Throws NormalizationError on a zero or non-finite integral.
SpectralDensity normalize(const SpectralDensity& d);

struct SampledDensity {
  std::vector<double> grid;
  std::vector<double> values;
  /// Probability mass outside the sampled window.
  double tail_mass = 0.0;
  /// Set when tail_mass exceeds kTailMassWarning.
  bool truncation_warning = false;
};

inline constexpr double kTailMassWarning = 1e-8;

/// Uniform grid over peak +/- support_multiplier * characteristic width.
/// Requires n_points >= 16 and support_multiplier > 0.
SampledDensity sample_grid(const SpectralDensity& d, std::size_t n_points,
                           double support_multiplier);

// ---------------------------------------------------------------------------
// Joint densities over the two phase-matching detunings.

struct Matrix2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row major
  double operator()(std::size_t r, std::size_t c) const { return m[2 * r + c]; }
  double determinant() const { return m[0] * m[3] - m[1] * m[2]; }
  Matrix2 transposed() const { return {{m[0], m[2], m[1], m[3]}}; }
  Matrix2 inverse() const;
  std::array<double, 2> apply(double x, double y) const {
    return {m[0] * x + m[1] * y, m[2] * x + m[3] * y};
  }
};

class JointSpectralDensity;

struct Separable {
  SpectralDensity first;
  SpectralDensity second;
};

/// Bivariate normal density, allowing frequency correlations between the
/// two detunings.
struct CorrelatedGaussian {
  double sigma_prime;
  double sigma_dprime;
  double correlation;  // in (-1, 1)
  double center_prime = 0.0;
  double center_dprime = 0.0;
};

struct Tabulated2D {
  std::vector<double> grid1;
  std::vector<double> grid2;
  std::vector<double> values;  // row major, grid1.size() x grid2.size()
};

/// Base density re-expressed in linearly mapped detunings mu = M nu.
struct Remapped {
  std::shared_ptr<const JointSpectralDensity> base;
  Matrix2 map;
};

using JointKind = std::variant<Separable, CorrelatedGaussian, Tabulated2D, Remapped>;

struct Box {
  double lo1, hi1, lo2, hi2;
};

class JointSpectralDensity {
 public:
  static JointSpectralDensity separable(SpectralDensity first, SpectralDensity second);
  static JointSpectralDensity correlated_gaussian(double sigma_prime, double sigma_dprime,
                                                  double correlation,
                                                  double center_prime = 0.0,
                                                  double center_dprime = 0.0);
  /// `values` is row major with grid1.size() rows.
  static JointSpectralDensity tabulated(std::vector<double> grid1, std::vector<double> grid2,
                                        std::vector<double> values);

  const JointKind& kind() const noexcept { return kind_; }
  double operator()(double detuning_prime, double detuning_dprime) const;

  /// Integral over the plane (exact for Tabulated2D, 1 for analytic kinds).
  double total_mass() const;
  /// Box covering the density: exact for tabulated data, the peak +/-
  /// multiplier * marginal width otherwise.
  Box support_box(double multiplier) const;
  /// Marginal centers and widths along each axis.
  std::array<double, 2> centers() const;
  std::array<double, 2> widths() const;

 private:
  explicit JointSpectralDensity(JointKind kind) : kind_(std::move(kind)) {}
  friend JointSpectralDensity remap(const JointSpectralDensity&, const Matrix2&);
  friend JointSpectralDensity normalize(const JointSpectralDensity&);
  JointKind kind_;
};

double evaluate(const JointSpectralDensity& d, double detuning_prime, double detuning_dprime);
JointSpectralDensity normalize(const JointSpectralDensity& d);

/// The same physical density written in detunings mu = map * nu. Requires
/// |det map| = 1 so unit area is preserved. Correlated Gaussians stay in
/// closed form; other kinds are wrapped.
JointSpectralDensity remap(const JointSpectralDensity& d, const Matrix2& map);

}  // namespace tpi
