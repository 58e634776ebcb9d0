#include "tpi/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tpi/constants.hpp"
#include "tpi/errors.hpp"
#include "tpi/quadrature.hpp"

namespace tpi {
namespace {

double sinc2(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 3.0 + 2.0 * u2 * u2 / 45.0;
  }
  const double s = std::sin(u) / u;
  return s * s;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values,
                   double x) {
  if (x < grid.front() || x > grid.back()) return 0.0;
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.end()) return values.back();
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return values[lo] + t * (values[hi] - values[lo]);
}

// Exact integral of the piecewise-linear interpolant over [a, b].
double interpolant_mass(const std::vector<double>& grid, const std::vector<double>& values,
                        double a, double b) {
  a = std::max(a, grid.front());
  b = std::min(b, grid.back());
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double lo = std::max(a, grid[i]);
    const double hi = std::min(b, grid[i + 1]);
    if (!(hi > lo)) continue;
    const double f_lo = interpolate(grid, values, lo);
    const double f_hi = interpolate(grid, values, hi);
    sum += 0.5 * (f_lo + f_hi) * (hi - lo);
  }
  return sum;
}

void check_grid(const std::vector<double>& grid, const char* what) {
  if (grid.size() < 2) throw std::invalid_argument(std::string(what) + ": need >= 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]))
      throw std::invalid_argument(std::string(what) + ": non-finite grid value");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
  }
}

void check_values(const std::vector<double>& values, std::size_t expected, const char* what) {
  if (values.size() != expected)
    throw std::invalid_argument(std::string(what) + ": value count does not match grid");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(std::string(what) + ": values must be finite and >= 0");
  }
}

void check_width(double w, const char* what) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw std::invalid_argument(std::string(what) + ": width must be positive and finite");
}

}  // namespace

SpectralDensity::SpectralDensity(DensityShape shape, double center_offset)
    : shape_(std::move(shape)), center_offset_(center_offset) {
  if (!std::isfinite(center_offset_))
    throw std::invalid_argument("spectral density: center offset must be finite");
  refresh_summary();
}

SpectralDensity SpectralDensity::gaussian(double sigma, double center_offset) {
  check_width(sigma, "gaussian");
  return SpectralDensity(Gaussian{sigma}, center_offset);
}

SpectralDensity SpectralDensity::lorentzian(double gamma, double center_offset) {
  check_width(gamma, "lorentzian");
  return SpectralDensity(Lorentzian{gamma}, center_offset);
}

SpectralDensity SpectralDensity::sinc_squared(double width, double center_offset) {
  check_width(width, "sinc_squared");
  return SpectralDensity(SincSquared{width}, center_offset);
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> grid, std::vector<double> values,
                                           double center_offset) {
  check_grid(grid, "tabulated density");
  check_values(values, grid.size(), "tabulated density");
  return SpectralDensity(Tabulated{std::move(grid), std::move(values)}, center_offset);
}

void SpectralDensity::refresh_summary() {
  if (const auto* g = std::get_if<Gaussian>(&shape_)) {
    width_ = g->sigma;
    peak_ = center_offset_;
  } else if (const auto* l = std::get_if<Lorentzian>(&shape_)) {
    width_ = l->gamma;
    peak_ = center_offset_;
  } else if (const auto* s = std::get_if<SincSquared>(&shape_)) {
    width_ = s->width;
    peak_ = center_offset_;
  } else {
    const auto& t = std::get<Tabulated>(shape_);
    const auto max_it = std::max_element(t.values.begin(), t.values.end());
    peak_ = t.grid[static_cast<std::size_t>(max_it - t.values.begin())] + center_offset_;
    // Moments of the interpolant; Simpson per cell is exact for linear * x^2.
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
      const double a = t.grid[i], b = t.grid[i + 1], mid = 0.5 * (a + b);
      const double fa = t.values[i], fb = t.values[i + 1], fm = 0.5 * (fa + fb);
      const double h = (b - a) / 6.0;
      m0 += h * (fa + 4.0 * fm + fb);
      m1 += h * (fa * a + 4.0 * fm * mid + fb * b);
      m2 += h * (fa * a * a + 4.0 * fm * mid * mid + fb * b * b);
    }
    double variance = 0.0;
    if (m0 > 0.0) {
      const double mean = m1 / m0;
      variance = std::max(0.0, m2 / m0 - mean * mean);
    }
    width_ = variance > 0.0 ? std::sqrt(variance) : 0.5 * (t.grid.back() - t.grid.front());
  }
}

double SpectralDensity::operator()(double detuning) const {
  const double x = detuning - center_offset_;
  if (const auto* g = std::get_if<Gaussian>(&shape_)) {
    const double z = x / g->sigma;
    return std::exp(-0.5 * z * z) / (g->sigma * std::sqrt(kTwoPi));
  }
  if (const auto* l = std::get_if<Lorentzian>(&shape_)) {
    return (l->gamma / kPi) / (x * x + l->gamma * l->gamma);
  }
  if (const auto* s = std::get_if<SincSquared>(&shape_)) {
    return sinc2(x / s->width) / (kPi * s->width);
  }
  const auto& t = std::get<Tabulated>(shape_);
  return interpolate(t.grid, t.values, x);
}

std::optional<std::pair<double, double>> SpectralDensity::compact_support() const {
  if (const auto* t = std::get_if<Tabulated>(&shape_)) {
    return std::make_pair(t->grid.front() + center_offset_, t->grid.back() + center_offset_);
  }
  return std::nullopt;
}

std::optional<double> SpectralDensity::intrinsic_period() const {
  if (const auto* s = std::get_if<SincSquared>(&shape_)) return kPi * s->width;
  return std::nullopt;
}

double SpectralDensity::total_mass() const {
  if (const auto* t = std::get_if<Tabulated>(&shape_)) {
    return interpolant_mass(t->grid, t->values, t->grid.front(), t->grid.back());
  }
  return 1.0;
}

double SpectralDensity::mass_between(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  const double a = lo - center_offset_;
  const double b = hi - center_offset_;
  if (const auto* g = std::get_if<Gaussian>(&shape_)) {
    const double s = g->sigma * std::sqrt(2.0);
    return 0.5 * (std::erf(b / s) - std::erf(a / s));
  }
  if (const auto* l = std::get_if<Lorentzian>(&shape_)) {
    return (std::atan(b / l->gamma) - std::atan(a / l->gamma)) / kPi;
  }
  if (const auto* t = std::get_if<Tabulated>(&shape_)) {
    return interpolant_mass(t->grid, t->values, a, b);
  }
  const auto& s = std::get<SincSquared>(shape_);
  auto seeds = quad::split(lo, hi, kPi * s.width);
  auto r = quad::integrate(std::function<double(double)>([this](double x) { return (*this)(x); }), seeds,
                           quad::Options{1e-13, 1e-15, 20000});
  return r.value;
}

SpectralDensity SpectralDensity::with_center_offset(double offset) const {
  return SpectralDensity(shape_, offset);
}

SpectralDensity SpectralDensity::scaled(double factor) const {
  check_width(factor, "scaled");
  if (const auto* g = std::get_if<Gaussian>(&shape_)) return gaussian(g->sigma * factor, center_offset_);
  if (const auto* l = std::get_if<Lorentzian>(&shape_)) return lorentzian(l->gamma * factor, center_offset_);
  if (const auto* s = std::get_if<SincSquared>(&shape_)) return sinc_squared(s->width * factor, center_offset_);
  const auto& t = std::get<Tabulated>(shape_);
  std::vector<double> grid(t.grid), values(t.values);
  for (auto& g : grid) g *= factor;
  for (auto& v : values) v /= factor;
  return tabulated(std::move(grid), std::move(values), center_offset_);
}

double evaluate(const SpectralDensity& d, double detuning) { return d(detuning); }

SpectralDensity normalize(const SpectralDensity& d) {
  const auto* t = std::get_if<Tabulated>(&d.shape());
  if (t == nullptr) return d;
  const double mass = d.total_mass();
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NormalizationError("spectral density has zero or non-finite integral");
  }
  std::vector<double> values(t->values);
  for (auto& v : values) v /= mass;
  return SpectralDensity::tabulated(t->grid, std::move(values), d.center_offset());
}

SampledDensity sample_grid(const SpectralDensity& d, std::size_t n_points,
                           double support_multiplier) {
  if (n_points < 16) throw std::invalid_argument("sample_grid: n_points must be >= 16");
  if (!(support_multiplier > 0.0))
    throw std::invalid_argument("sample_grid: support_multiplier must be > 0");

  const double half = support_multiplier * d.characteristic_width();
  const double lo = d.peak() - half;
  const double hi = d.peak() + half;

  SampledDensity out;
  out.grid.resize(n_points);
  out.values.resize(n_points);
  const double step = (hi - lo) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    out.grid[i] = (i + 1 == n_points) ? hi : lo + step * static_cast<double>(i);
    out.values[i] = d(out.grid[i]);
  }

  const double a = lo - d.center_offset();
  const double b = hi - d.center_offset();
  if (const auto* g = std::get_if<Gaussian>(&d.shape())) {
    const double s = g->sigma * std::sqrt(2.0);
    out.tail_mass = 0.5 * std::erfc(b / s) + 0.5 * std::erfc(-a / s);
  } else if (const auto* l = std::get_if<Lorentzian>(&d.shape())) {
    out.tail_mass = (kPi - std::atan(b / l->gamma) + std::atan(a / l->gamma)) / kPi;
  } else {
    out.tail_mass = std::max(0.0, d.total_mass() - d.mass_between(lo, hi));
  }
  out.truncation_warning = out.tail_mass > kTailMassWarning;
  return out;
}

// ---------------------------------------------------------------------------

Matrix2 Matrix2::inverse() const {
  const double det = determinant();
  if (det == 0.0) throw std::invalid_argument("Matrix2: singular");
  return {{m[3] / det, -m[1] / det, -m[2] / det, m[0] / det}};
}

JointSpectralDensity JointSpectralDensity::separable(SpectralDensity first,
                                                     SpectralDensity second) {
  return JointSpectralDensity(Separable{std::move(first), std::move(second)});
}

JointSpectralDensity JointSpectralDensity::correlated_gaussian(double sigma_prime,
                                                               double sigma_dprime,
                                                               double correlation,
                                                               double center_prime,
                                                               double center_dprime) {
  check_width(sigma_prime, "correlated gaussian");
  check_width(sigma_dprime, "correlated gaussian");
  if (!(std::abs(correlation) < 1.0))
    throw std::invalid_argument("correlated gaussian: |correlation| must be < 1");
  return JointSpectralDensity(
      CorrelatedGaussian{sigma_prime, sigma_dprime, correlation, center_prime, center_dprime});
}

JointSpectralDensity JointSpectralDensity::tabulated(std::vector<double> grid1,
                                                     std::vector<double> grid2,
                                                     std::vector<double> values) {
  check_grid(grid1, "tabulated 2D density");
  check_grid(grid2, "tabulated 2D density");
  check_values(values, grid1.size() * grid2.size(), "tabulated 2D density");
  return JointSpectralDensity(Tabulated2D{std::move(grid1), std::move(grid2), std::move(values)});
}

namespace {

double bilinear(const Tabulated2D& t, double x, double y) {
  const auto& g1 = t.grid1;
  const auto& g2 = t.grid2;
  if (x < g1.front() || x > g1.back() || y < g2.front() || y > g2.back()) return 0.0;
  auto locate = [](const std::vector<double>& g, double v) {
    auto it = std::upper_bound(g.begin(), g.end(), v);
    std::size_t hi = static_cast<std::size_t>(it - g.begin());
    if (hi >= g.size()) hi = g.size() - 1;
    return hi - 1;
  };
  const std::size_t i = locate(g1, x);
  const std::size_t j = locate(g2, y);
  const std::size_t n2 = g2.size();
  const double tx = (x - g1[i]) / (g1[i + 1] - g1[i]);
  const double ty = (y - g2[j]) / (g2[j + 1] - g2[j]);
  const double f00 = t.values[i * n2 + j];
  const double f01 = t.values[i * n2 + j + 1];
  const double f10 = t.values[(i + 1) * n2 + j];
  const double f11 = t.values[(i + 1) * n2 + j + 1];
  return (1 - tx) * (1 - ty) * f00 + (1 - tx) * ty * f01 + tx * (1 - ty) * f10 + tx * ty * f11;
}

double tabulated2d_mass(const Tabulated2D& t) {
  const std::size_t n1 = t.grid1.size(), n2 = t.grid2.size();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n1; ++i) {
    for (std::size_t j = 0; j + 1 < n2; ++j) {
      const double avg = 0.25 * (t.values[i * n2 + j] + t.values[i * n2 + j + 1] +
                                 t.values[(i + 1) * n2 + j] + t.values[(i + 1) * n2 + j + 1]);
      sum += avg * (t.grid1[i + 1] - t.grid1[i]) * (t.grid2[j + 1] - t.grid2[j]);
    }
  }
  return sum;
}

// Centroid and RMS widths of the tabulated data by node-weighted sums.
std::array<double, 4> tabulated2d_moments(const Tabulated2D& t) {
  const std::size_t n1 = t.grid1.size(), n2 = t.grid2.size();
  double w = 0, s1 = 0, s2 = 0, q1 = 0, q2 = 0;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double v = t.values[i * n2 + j];
      w += v;
      s1 += v * t.grid1[i];
      s2 += v * t.grid2[j];
      q1 += v * t.grid1[i] * t.grid1[i];
      q2 += v * t.grid2[j] * t.grid2[j];
    }
  }
  if (!(w > 0.0)) {
    return {0.5 * (t.grid1.front() + t.grid1.back()), 0.5 * (t.grid2.front() + t.grid2.back()),
            0.5 * (t.grid1.back() - t.grid1.front()), 0.5 * (t.grid2.back() - t.grid2.front())};
  }
  const double c1 = s1 / w, c2 = s2 / w;
  return {c1, c2, std::sqrt(std::max(q1 / w - c1 * c1, 0.0)),
          std::sqrt(std::max(q2 / w - c2 * c2, 0.0))};
}

}  // namespace

double JointSpectralDensity::operator()(double x, double y) const {
  if (const auto* s = std::get_if<Separable>(&kind_)) return s->first(x) * s->second(y);
  if (const auto* g = std::get_if<CorrelatedGaussian>(&kind_)) {
    const double z1 = (x - g->center_prime) / g->sigma_prime;
    const double z2 = (y - g->center_dprime) / g->sigma_dprime;
    const double one_minus = 1.0 - g->correlation * g->correlation;
    const double q = (z1 * z1 - 2.0 * g->correlation * z1 * z2 + z2 * z2) / one_minus;
    return std::exp(-0.5 * q) /
           (kTwoPi * g->sigma_prime * g->sigma_dprime * std::sqrt(one_minus));
  }
  if (const auto* t = std::get_if<Tabulated2D>(&kind_)) return bilinear(*t, x, y);
  const auto& r = std::get<Remapped>(kind_);
  const auto nu = r.map.inverse().apply(x, y);
  return (*r.base)(nu[0], nu[1]) / std::abs(r.map.determinant());
}

double JointSpectralDensity::total_mass() const {
  if (const auto* s = std::get_if<Separable>(&kind_))
    return s->first.total_mass() * s->second.total_mass();
  if (std::holds_alternative<CorrelatedGaussian>(kind_)) return 1.0;
  if (const auto* t = std::get_if<Tabulated2D>(&kind_)) return tabulated2d_mass(*t);
  return std::get<Remapped>(kind_).base->total_mass();
}

std::array<double, 2> JointSpectralDensity::centers() const {
  if (const auto* s = std::get_if<Separable>(&kind_)) return {s->first.peak(), s->second.peak()};
  if (const auto* g = std::get_if<CorrelatedGaussian>(&kind_))
    return {g->center_prime, g->center_dprime};
  if (const auto* t = std::get_if<Tabulated2D>(&kind_)) {
    const auto m = tabulated2d_moments(*t);
    return {m[0], m[1]};
  }
  const auto& r = std::get<Remapped>(kind_);
  const auto c = r.base->centers();
  return r.map.apply(c[0], c[1]);
}

std::array<double, 2> JointSpectralDensity::widths() const {
  if (const auto* s = std::get_if<Separable>(&kind_))
    return {s->first.characteristic_width(), s->second.characteristic_width()};
  if (const auto* g = std::get_if<CorrelatedGaussian>(&kind_))
    return {g->sigma_prime, g->sigma_dprime};
  if (const auto* t = std::get_if<Tabulated2D>(&kind_)) {
    const auto m = tabulated2d_moments(*t);
    return {m[2], m[3]};
  }
  const auto& r = std::get<Remapped>(kind_);
  const auto w = r.base->widths();
  return {std::hypot(r.map(0, 0) * w[0], r.map(0, 1) * w[1]),
          std::hypot(r.map(1, 0) * w[0], r.map(1, 1) * w[1])};
}

Box JointSpectralDensity::support_box(double multiplier) const {
  if (const auto* s = std::get_if<Separable>(&kind_)) {
    auto axis = [multiplier](const SpectralDensity& d) {
      if (auto cs = d.compact_support()) return *cs;
      const double half = multiplier * d.characteristic_width();
      return std::make_pair(d.peak() - half, d.peak() + half);
    };
    const auto a = axis(s->first);
    const auto b = axis(s->second);
    return {a.first, a.second, b.first, b.second};
  }
  if (const auto* g = std::get_if<CorrelatedGaussian>(&kind_)) {
    return {g->center_prime - multiplier * g->sigma_prime,
            g->center_prime + multiplier * g->sigma_prime,
            g->center_dprime - multiplier * g->sigma_dprime,
            g->center_dprime + multiplier * g->sigma_dprime};
  }
  if (const auto* t = std::get_if<Tabulated2D>(&kind_)) {
    return {t->grid1.front(), t->grid1.back(), t->grid2.front(), t->grid2.back()};
  }
  const auto& r = std::get<Remapped>(kind_);
  const Box b = r.base->support_box(multiplier);
  Box out{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (double x : {b.lo1, b.hi1}) {
    for (double y : {b.lo2, b.hi2}) {
      const auto p = r.map.apply(x, y);
      out.lo1 = std::min(out.lo1, p[0]);
      out.hi1 = std::max(out.hi1, p[0]);
      out.lo2 = std::min(out.lo2, p[1]);
      out.hi2 = std::max(out.hi2, p[1]);
    }
  }
  return out;
}

double evaluate(const JointSpectralDensity& d, double x, double y) { return d(x, y); }

JointSpectralDensity normalize(const JointSpectralDensity& d) {
  if (const auto* s = std::get_if<Separable>(&d.kind_)) {
    return JointSpectralDensity::separable(normalize(s->first), normalize(s->second));
  }
  if (std::holds_alternative<CorrelatedGaussian>(d.kind_)) return d;
  if (const auto* t = std::get_if<Tabulated2D>(&d.kind_)) {
    const double mass = tabulated2d_mass(*t);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw NormalizationError("joint spectral density has zero or non-finite integral");
    }
    std::vector<double> values(t->values);
    for (auto& v : values) v /= mass;
    return JointSpectralDensity::tabulated(t->grid1, t->grid2, std::move(values));
  }
  const auto& r = std::get<Remapped>(d.kind_);
  return remap(normalize(*r.base), r.map);
}

JointSpectralDensity remap(const JointSpectralDensity& d, const Matrix2& map) {
  if (std::abs(std::abs(map.determinant()) - 1.0) > 1e-12) {
    throw std::invalid_argument("remap: map must have |det| = 1");
  }
  if (const auto* g = std::get_if<CorrelatedGaussian>(&d.kind_)) {
    const double s11 = g->sigma_prime * g->sigma_prime;
    const double s22 = g->sigma_dprime * g->sigma_dprime;
    const double s12 = g->correlation * g->sigma_prime * g->sigma_dprime;
    // Sigma' = M Sigma M^T
    const double a = map(0, 0), b = map(0, 1), c = map(1, 0), e = map(1, 1);
    const double t11 = a * a * s11 + 2 * a * b * s12 + b * b * s22;
    const double t22 = c * c * s11 + 2 * c * e * s12 + e * e * s22;
    const double t12 = a * c * s11 + (a * e + b * c) * s12 + b * e * s22;
    const double sp = std::sqrt(t11), sd = std::sqrt(t22);
    const auto mu = map.apply(g->center_prime, g->center_dprime);
    return JointSpectralDensity::correlated_gaussian(sp, sd, t12 / (sp * sd), mu[0], mu[1]);
  }
  if (const auto* r = std::get_if<Remapped>(&d.kind_)) {
    const Matrix2& inner = r->map;
    Matrix2 composed{{map(0, 0) * inner(0, 0) + map(0, 1) * inner(1, 0),
                      map(0, 0) * inner(0, 1) + map(0, 1) * inner(1, 1),
                      map(1, 0) * inner(0, 0) + map(1, 1) * inner(1, 0),
                      map(1, 0) * inner(0, 1) + map(1, 1) * inner(1, 1)}};
    return JointSpectralDensity(Remapped{r->base, composed});
  }
  return JointSpectralDensity(Remapped{std::make_shared<const JointSpectralDensity>(d), map});
}

}  // namespace tpi
