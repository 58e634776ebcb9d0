#include "tpi/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace tpi::quad {
namespace {

// QUADPACK qk21 abscissae and weights. Odd indices of kXgk are the
// 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208323258240, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

template <class T>
struct Segment {
  double lo;
  double hi;
  T value;
  double error;
};

template <class T>
Segment<T> gk21(const std::function<T(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const T fc = f(center);
  T kronrod = fc * kWgk[10];
  T gauss{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

template <class T>
Result<T> adaptive(const std::function<T(double)>& f, std::span<const Interval> seeds,
                   const Options& opts) {
  auto worse = [](const Segment<T>& a, const Segment<T>& b) { return a.error < b.error; };
  std::priority_queue<Segment<T>, std::vector<Segment<T>>, decltype(worse)> queue(worse);

  Result<T> out;
  T total{};
  double total_error = 0.0;
  // Segments too narrow to bisect further keep their error here.
  double frozen_error = 0.0;
  T frozen_value{};

  for (const auto& s : seeds) {
    if (!(s.hi > s.lo)) continue;
    auto seg = gk21(f, s.lo, s.hi);
    out.evaluations += 21;
    total += seg.value;
    total_error += seg.error;
    queue.push(seg);
  }

  std::size_t count = queue.size();
  while (true) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (total_error <= target) break;
    if (queue.empty() || count >= opts.max_intervals) {
      out.converged = false;
      break;
    }
    Segment<T> worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
    if ((worst.hi - worst.lo) < 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      frozen_error += worst.error;
      frozen_value += worst.value;
      continue;
    }
    auto left = gk21(f, worst.lo, mid);
    auto right = gk21(f, mid, worst.hi);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }

  // Re-sum from the segments to avoid drift from the running updates.
  T sum = frozen_value;
  double err = frozen_error;
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  out.value = sum;
  out.abs_error = err;
  return out;
}

}  // namespace

Result<double> integrate(const std::function<double(double)>& f,
                         std::span<const Interval> seeds, const Options& opts) {
  return adaptive<double>(f, seeds, opts);
}

Result<Complex> integrate(const std::function<Complex(double)>& f,
                          std::span<const Interval> seeds, const Options& opts) {
  return adaptive<Complex>(f, seeds, opts);
}

std::vector<Interval> split(double lo, double hi, double max_length) {
  std::vector<Interval> pieces;
  if (!(hi > lo)) return pieces;
  std::size_t n = 1;
  if (max_length > 0.0 && std::isfinite(max_length)) {
    n = static_cast<std::size_t>(std::ceil((hi - lo) / max_length));
    n = std::clamp<std::size_t>(n, 1, 100000);
  }
  const double step = (hi - lo) / static_cast<double>(n);
  pieces.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lo + step * static_cast<double>(i);
    const double b = (i + 1 == n) ? hi : lo + step * static_cast<double>(i + 1);
    pieces.push_back({a, b});
  }
  return pieces;
}

std::optional<Complex> levin_u(std::span<const Complex> partial_sums,
                               std::span<const Complex> terms) {
  const std::size_t n = partial_sums.size();
  if (n == 0 || terms.size() != n) return std::nullopt;
  if (n == 1) return partial_sums[0];
  // L_k^{(0)} with beta = 1, k = n - 1, omega_j = (beta + j) a_j.
  const std::size_t k = n - 1;
  const double beta = 1.0;
  Complex numerator{};
  Complex denominator{};
  double binom = 1.0;
  for (std::size_t j = 0; j <= k; ++j) {
    const Complex omega = (beta + static_cast<double>(j)) * terms[j];
    if (omega == Complex{}) return std::nullopt;
    const double ratio = (beta + static_cast<double>(j)) / (beta + static_cast<double>(k));
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double c = sign * binom * std::pow(ratio, static_cast<double>(k) - 1.0);
    numerator += c * partial_sums[j] / omega;
    denominator += c / omega;
    binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
  }
  if (denominator == Complex{}) return std::nullopt;
  return numerator / denominator;
}

Result<Complex> integrate_tail(const std::function<Complex(double)>& f, double start,
                               int direction, const TailOptions& opts) {
  Result<Complex> out;
  const double sign = direction >= 0 ? 1.0 : -1.0;
  std::vector<Complex> sums;
  std::vector<Complex> terms;
  Complex running{};
  double block = opts.block_length;
  double offset = 0.0;
  std::optional<Complex> previous_estimate;
  int stable = 0;
  // Levin transforms beyond this order lose precision to cancellation.
  constexpr std::size_t kWindow = 14;

  for (std::size_t m = 0; m < opts.max_blocks; ++m) {
    const double a = start + sign * offset;
    const double b = start + sign * (offset + block);
    const Interval seed{std::min(a, b), std::max(a, b)};
    auto r = integrate(f, std::span<const Interval>(&seed, 1), opts.block);
    out.evaluations += r.evaluations;
    out.abs_error += r.abs_error;
    const Complex term = r.value;
    running += term;
    sums.push_back(running);
    terms.push_back(term);
    offset += block;
    if (opts.geometric) block *= 2.0;

    if (std::abs(term) <= 0.01 * opts.abs_tol && m >= 1) {
      out.value = running;
      return out;
    }
    if (sums.size() < 3) continue;
    const std::size_t w = std::min(kWindow, sums.size());
    auto estimate = levin_u(std::span<const Complex>(sums).last(w),
                            std::span<const Complex>(terms).last(w));
    if (!estimate) {
      // A vanishing block term means the tail has underflowed.
      out.value = running;
      return out;
    }
    if (previous_estimate && std::abs(*estimate - *previous_estimate) <= opts.abs_tol) {
      if (++stable >= 2) {
        out.value = *estimate;
        out.abs_error += std::abs(*estimate - *previous_estimate);
        return out;
      }
    } else {
      stable = 0;
    }
    previous_estimate = estimate;
  }
  out.converged = false;
  out.value = previous_estimate.value_or(running);
  return out;
}

namespace {
template <class T>
T pairwise(std::span<const T> v) {
  if (v.size() <= 8) {
    T s{};
    for (const auto& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}
}  // namespace

double pairwise_sum(std::span<const double> values) { return pairwise(values); }
Complex pairwise_sum(std::span<const Complex> values) { return pairwise(values); }

}  // namespace tpi::quad
