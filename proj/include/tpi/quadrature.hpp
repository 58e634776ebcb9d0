#pragma once

// Numerical integration primitives: adaptive 21-point Gauss-Kronrod on a
// set of seed intervals, semi-infinite tails by block summation with Levin
// u-transform acceleration, and pairwise summation.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tpi::quad {

using Complex = std::complex<double>;

struct Interval {
  double lo;
  double hi;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_intervals = 4000;
};

template <class T>
struct Result {
  T value{};
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Globally adaptive GK21 over the union of `seeds`. The worst segment is
/// bisected until the summed error estimate meets
/// max(abs_tol, rel_tol * |value|) or `max_intervals` is reached.
Result<double> integrate(const std::function<double(double)>& f,
                         std::span<const Interval> seeds, const Options& opts = {});
Result<Complex> integrate(const std::function<Complex(double)>& f,
                          std::span<const Interval> seeds, const Options& opts = {});

inline Result<double> integrate(const std::function<double(double)>& f, double lo,
                                double hi, const Options& opts = {}) {
  const Interval seed{lo, hi};
  return integrate(f, std::span<const Interval>(&seed, 1), opts);
}

/// Splits [lo, hi] into equal pieces no longer than `max_length`.
std::vector<Interval> split(double lo, double hi, double max_length);

struct TailOptions {
  /// Length of the first block. For oscillatory integrands this should be a
  /// (half-)period so the block sums form a clean alternating or rotating
  /// sequence.
  double block_length = 1.0;
  /// Double each successive block (non-oscillatory algebraic tails).
  bool geometric = false;
  std::size_t max_blocks = 80;
  double abs_tol = 1e-13;
  Options block{1e-12, 1e-16, 2000};
};

/// Integral of f over [start, +inf) when direction > 0, or (-inf, start] when
/// direction < 0.
Result<Complex> integrate_tail(const std::function<Complex(double)>& f, double start,
                               int direction, const TailOptions& opts);

/// Levin u-transform of the series whose partial sums are `partial_sums`
/// (terms[i] = partial_sums[i] - partial_sums[i-1]). Returns nullopt when a
/// term vanishes and the transform is undefined.
std::optional<Complex> levin_u(std::span<const Complex> partial_sums,
                               std::span<const Complex> terms);

/// Sum in a fixed pairwise tree order; deterministic for a given length.
double pairwise_sum(std::span<const double> values);
Complex pairwise_sum(std::span<const Complex> values);

}  // namespace tpi::quad
