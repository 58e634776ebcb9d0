#include "tpi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "parallel.hpp"
#include "tpi/constants.hpp"
#include "tpi/errors.hpp"

namespace tpi {

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::DeltaPhi:
      return "delta_phi";
    case SweepVariable::DeltaL:
      return "delta_L";
    case SweepVariable::DeltaLPrime:
      return "delta_L_prime";
    case SweepVariable::DeltaLDPrime:
      return "delta_L_dprime";
    case SweepVariable::Diagonal:
      return "diagonal";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  if (n_points < 3) throw std::invalid_argument("sweep needs at least 3 points");
  if (!(start < stop) || !std::isfinite(start) || !std::isfinite(stop))
    throw std::invalid_argument("sweep needs finite start < stop");
  amps.validate();
}

SweepTable run_sweep(const SweepSpec& spec, std::size_t threads) {
  spec.validate();
  const std::size_t n = spec.n_points;
  SweepTable table(n);
  auto failures = detail::parallel_for(n, threads, [&](std::size_t i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = (i + 1 == n) ? spec.stop : spec.start + (spec.stop - spec.start) * t;
    ReducedParameters r = spec.fixed;
    switch (spec.variable) {
      case SweepVariable::DeltaPhi:
        r.delta_phi = v;
        break;
      case SweepVariable::DeltaL:
        r.delta_L = v;
        break;
      case SweepVariable::DeltaLPrime:
        r.delta_L_prime = v;
        break;
      case SweepVariable::DeltaLDPrime:
        r.delta_L_dprime = v;
        break;
      case SweepVariable::Diagonal:
        r.delta_L_prime = v;
        r.delta_L_dprime = v;
        break;
    }
    table[i] = {v, rate_length(spec.source, r, spec.amps, spec.coherence)};
  });
  if (!failures.empty()) {
    const auto& first = failures.front();
    try {
      std::rethrow_exception(first.error);
    } catch (const IntegrationError& e) {
      throw IntegrationError(e.what(), e.error_estimate(), first.index);
    }
  }
  return table;
}

namespace {

struct Point {
  double x;
  double y;
};

// Vertex of the parabola through three equally spaced samples around i.
Point refine(const SweepTable& t, std::size_t i) {
  const Point p{t[i].parameter_value, t[i].result.rate};
  if (i == 0 || i + 1 >= t.size()) return p;
  const double y0 = t[i - 1].result.rate, y1 = t[i].result.rate, y2 = t[i + 1].result.rate;
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return p;
  const double h = t[i + 1].parameter_value - t[i].parameter_value;
  const double offset = 0.5 * (y0 - y2) / denom;  // in steps
  if (std::abs(offset) > 1.0) return p;
  return {p.x + offset * h, y1 - 0.25 * (y0 - y2) * offset};
}

std::vector<double> crossings(const std::vector<double>& x, const std::vector<double>& d,
                              double lo, double hi) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const bool up = d[i] < 0.0 && d[i + 1] >= 0.0;
    const bool down = d[i] > 0.0 && d[i + 1] <= 0.0;
    if (!up && !down) continue;
    const double xc = x[i] + (x[i + 1] - x[i]) * d[i] / (d[i] - d[i + 1]);
    if (xc >= lo && xc <= hi) out.push_back(xc);
  }
  return out;
}

double period_from(const std::vector<double>& c) {
  if (c.size() < 2) throw InsufficientSampling("fewer than two fringe zero crossings in scan");
  return 2.0 * (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

// 1/e crossing of the visibility profile on one side of zero.
std::optional<double> envelope_crossing(const std::vector<Point>& profile, double target,
                                        int side) {
  std::vector<Point> half;
  for (const auto& p : profile) {
    if (side * p.x >= 0.0) half.push_back({std::abs(p.x), p.y});
  }
  std::sort(half.begin(), half.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < half.size(); ++i) {
    if (half[i].y <= target && half[i - 1].y > target) {
      const double t = (half[i - 1].y - target) / (half[i - 1].y - half[i].y);
      return half[i - 1].x + t * (half[i].x - half[i - 1].x);
    }
  }
  return std::nullopt;
}

}  // namespace

FringeMetrics extract_fringe_metrics(const SweepTable& table) {
  if (table.size() < 48) throw InsufficientSampling("fringe scan has fewer than 48 points");
  const std::size_t n = table.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = table[i].parameter_value;
    y[i] = table[i].result.rate;
  }
  const double step = (x.back() - x.front()) / static_cast<double>(n - 1);

  // Crossings of the rate through the non-oscillating level each row
  // carries. A running mean over one period would pick up a quadrature
  // component from the envelope slope and stretch the spacing when the
  // envelope spans only a few fringes.
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = y[i] - table[i].result.baseline;
  const double rough = period_from(crossings(x, d, x.front(), x.back()));
  const double period =
      period_from(crossings(x, d, x.front() + 0.5 * rough, x.back() - 0.5 * rough));

  constexpr double kSlack = 1e-9;
  if ((x.back() - x.front()) < 3.0 * period * (1.0 - kSlack))
    throw InsufficientSampling("fringe scan covers fewer than 3 periods");
  if (period / step < 16.0 * (1.0 - kSlack))
    throw InsufficientSampling("fringe scan has fewer than 16 points per period");

  FringeMetrics m{};
  m.period = period;

  const double center = 0.5 * (x.front() + x.back());
  std::optional<Point> hi_pt, lo_pt;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(x[i] - center) > 0.5 * period) continue;
    if (!hi_pt || y[i] > hi_pt->y) hi_pt = Point{static_cast<double>(i), y[i]};
    if (!lo_pt || y[i] < lo_pt->y) lo_pt = Point{static_cast<double>(i), y[i]};
  }
  const double r_max = refine(table, static_cast<std::size_t>(hi_pt->x)).y;
  const double r_min = std::max(0.0, refine(table, static_cast<std::size_t>(lo_pt->x)).y);
  m.visibility = (r_max + r_min) > 0.0 ? (r_max - r_min) / (r_max + r_min) : 0.0;

  // Visibility profile from consecutive maximum/minimum pairs.
  std::vector<Point> extrema;
  std::vector<int> kinds;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (y[i] >= y[i - 1] && y[i] > y[i + 1]) {
      extrema.push_back(refine(table, i));
      kinds.push_back(+1);
    } else if (y[i] <= y[i - 1] && y[i] < y[i + 1]) {
      extrema.push_back(refine(table, i));
      kinds.push_back(-1);
    }
  }
  std::vector<Point> profile;
  for (std::size_t k = 0; k + 1 < extrema.size(); ++k) {
    if (kinds[k] == kinds[k + 1]) continue;
    const double a = extrema[k].y, b = std::max(0.0, extrema[k + 1].y);
    const double s = std::max(0.0, a) + b;
    if (s <= 0.0) continue;
    profile.push_back({0.5 * (extrema[k].x + extrema[k + 1].x), std::abs(a - b) / s});
  }
  m.envelope_halfwidth = std::numeric_limits<double>::infinity();
  if (profile.size() >= 2) {
    // Visibility at zero by interpolation between the nearest profile points.
    std::sort(profile.begin(), profile.end(),
              [](const Point& a, const Point& b) { return a.x < b.x; });
    double v0 = profile.front().y;
    if (profile.front().x > 0.0 || profile.back().x < 0.0) {
      v0 = std::abs(profile.front().x) < std::abs(profile.back().x) ? profile.front().y
                                                                    : profile.back().y;
    } else {
      for (std::size_t k = 1; k < profile.size(); ++k) {
        if (profile[k].x >= 0.0) {
          const double t = (0.0 - profile[k - 1].x) / (profile[k].x - profile[k - 1].x);
          v0 = profile[k - 1].y + t * (profile[k].y - profile[k - 1].y);
          break;
        }
      }
    }
    const double target = v0 / std::exp(1.0);
    const auto right = envelope_crossing(profile, target, +1);
    const auto left = envelope_crossing(profile, target, -1);
    if (right && left) {
      m.envelope_halfwidth = 0.5 * (*right + *left);
    } else if (right) {
      m.envelope_halfwidth = *right;
    } else if (left) {
      m.envelope_halfwidth = *left;
    }
  }
  return m;
}

namespace {

struct AxisDip {
  double rate0;
  double baseline;
  double fwhm;
  bool side_lobe;
};

AxisDip analyse_axis(const SweepTable& t) {
  if (t.size() < 3) throw InsufficientSampling("dip scan needs at least 3 points");
  const double step =
      (t.back().parameter_value - t.front().parameter_value) / static_cast<double>(t.size() - 1);
  std::size_t o = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs(t[i].parameter_value) < std::abs(t[o].parameter_value)) o = i;
  }
  if (std::abs(t[o].parameter_value) > 0.5 * std::abs(step) * (1.0 + 1e-9))
    throw InsufficientSampling("dip scan does not contain the origin");

  AxisDip a{};
  a.rate0 = t[o].result.rate;
  a.baseline = t[o].result.baseline;
  const double central = std::abs(a.rate0 - a.baseline);
  const double half = 0.5 * central;
  auto g = [&](std::size_t i) { return std::abs(t[i].result.rate - a.baseline); };

  auto walk = [&](int dir) -> std::optional<double> {
    std::size_t prev = o;
    for (std::size_t i = o;;) {
      if (dir > 0 ? i + 1 >= t.size() : i == 0) return std::nullopt;
      i = dir > 0 ? i + 1 : i - 1;
      if (g(i) <= half) {
        const double f = (g(prev) - half) / (g(prev) - g(i));
        return t[prev].parameter_value + f * (t[i].parameter_value - t[prev].parameter_value);
      }
      prev = i;
    }
  };
  const auto right = walk(+1);
  const auto left = walk(-1);
  a.fwhm = (right && left) ? *right - *left : std::numeric_limits<double>::infinity();

  // Rise of |R - baseline| above its running minimum going outward.
  double lobe = 0.0;
  for (int dir : {+1, -1}) {
    double running = g(o);
    for (std::size_t i = o; dir > 0 ? i + 1 < t.size() : i > 0;) {
      i = dir > 0 ? i + 1 : i - 1;
      running = std::min(running, g(i));
      lobe = std::max(lobe, g(i) - running);
    }
  }
  a.side_lobe = lobe > 0.05 * central;
  return a;
}

}  // namespace

DipMetrics extract_dip_metrics(const SweepTable& table_prime, const SweepTable& table_dprime) {
  const AxisDip p = analyse_axis(table_prime);
  const AxisDip q = analyse_axis(table_dprime);
  DipMetrics m{};
  m.extremum_kind = p.rate0 < p.baseline ? Extremum::Dip : Extremum::Hump;
  m.depth = p.baseline > 0.0 ? std::abs(1.0 - p.rate0 / p.baseline) : 0.0;
  m.fwhm_prime = p.fwhm;
  m.fwhm_dprime = q.fwhm;
  m.not_monotone = p.side_lobe || q.side_lobe;
  return m;
}

CentralFrequencies degenerate_frequencies(SourceKind kind, double pump_wavelength) {
  const double wp = angular_frequency_from_wavelength(pump_wavelength);
  CentralFrequencies f = kind == SourceKind::Cpdc
                             ? CentralFrequencies{wp / 2, wp / 4, wp / 4}
                             : CentralFrequencies{wp / 3, wp / 3, wp / 3};
  f.validate();
  return f;
}

}  // namespace tpi
