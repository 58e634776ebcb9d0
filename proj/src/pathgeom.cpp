#include "tpi/pathgeom.hpp"

#include <cmath>
#include <stdexcept>

#include "tpi/constants.hpp"

namespace tpi {

void PathConfiguration::validate() const {
  for (double l : {l_a1, l_b1, l_c1, l_p1, l_a2, l_b2, l_c2, l_p2}) {
    if (!std::isfinite(l) || l < 0.0)
      throw std::invalid_argument("path length must be finite and >= 0");
  }
  for (double phi : {phi_a1, phi_b1, phi_c1, phi_p1, phi_a2, phi_b2, phi_c2, phi_p2}) {
    if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
  }
}

CentralFrequencies CentralFrequencies::from_wavelengths(double lambda_a, double lambda_b,
                                                        double lambda_c) {
  CentralFrequencies f{angular_frequency_from_wavelength(lambda_a),
                       angular_frequency_from_wavelength(lambda_b),
                       angular_frequency_from_wavelength(lambda_c)};
  f.validate();
  return f;
}

void CentralFrequencies::validate() const {
  for (double w : {omega_a0, omega_b0, omega_c0}) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("central frequencies must be positive and finite");
  }
}

namespace {

double phase_sum_1(const PathConfiguration& p) {
  return p.phi_a1 + p.phi_b1 + p.phi_c1 + p.phi_p1;
}
double phase_sum_2(const PathConfiguration& p) {
  return p.phi_a2 + p.phi_b2 + p.phi_c2 + p.phi_p2;
}

}  // namespace

ReducedParameters reduce_cpdc(const PathConfiguration& p) {
  ReducedParameters r;
  r.delta_L = (p.l_a1 / 2 + (p.l_b1 + p.l_c1) / 4 + p.l_p1) -
              (p.l_a2 / 2 + (p.l_b2 + p.l_c2) / 4 + p.l_p2);
  r.delta_L_prime = (p.l_a1 / 2 - (p.l_b1 + p.l_c1) / 4) - (p.l_a2 / 2 - (p.l_b2 + p.l_c2) / 4);
  r.delta_L_dprime = (p.l_b1 - p.l_c1) / 2 - (p.l_b2 - p.l_c2) / 2;
  r.delta_phi = phase_sum_1(p) - phase_sum_2(p);
  return r;
}

ReducedParameters reduce_topdc(const PathConfiguration& p, TopdcChoice choice) {
  ReducedParameters r;
  r.choice = choice;
  r.delta_L = ((p.l_a1 + p.l_b1 + p.l_c1) / 3 + p.l_p1) - ((p.l_a2 + p.l_b2 + p.l_c2) / 3 + p.l_p2);
  switch (choice) {
    case TopdcChoice::One:
      r.delta_L_prime = (p.l_a1 - p.l_b1) - (p.l_a2 - p.l_b2);
      r.delta_L_dprime = (p.l_a1 - p.l_c1) - (p.l_a2 - p.l_c2);
      break;
    case TopdcChoice::Two:
      r.delta_L_prime = (p.l_b1 - p.l_a1) - (p.l_b2 - p.l_a2);
      r.delta_L_dprime = (p.l_b1 - p.l_c1) - (p.l_b2 - p.l_c2);
      break;
    case TopdcChoice::Three:
      r.delta_L_prime = (p.l_c1 - p.l_b1) - (p.l_c2 - p.l_b2);
      r.delta_L_dprime = (p.l_c1 - p.l_a1) - (p.l_c2 - p.l_a2);
      break;
  }
  r.delta_phi = phase_sum_1(p) - phase_sum_2(p);
  return r;
}

ReducedParameters reduce(const PathConfiguration& p, SourceKind kind, TopdcChoice choice) {
  return kind == SourceKind::Cpdc ? reduce_cpdc(p) : reduce_topdc(p, choice);
}

Carriers carrier_frequencies(const CentralFrequencies& f, SourceKind kind, TopdcChoice choice) {
  const double wa = f.omega_a0, wb = f.omega_b0, wc = f.omega_c0;
  if (kind == SourceKind::Cpdc) return {wa + wb + wc, wa - wb - wc, wb - wc};
  // Each asymmetry length is (reference photon) - (other photon), so its
  // carrier is a third of the pump minus the other photon's frequency.
  const double third = (wa + wb + wc) / 3.0;
  switch (choice) {
    case TopdcChoice::One:
      return {wa + wb + wc, third - wb, third - wc};
    case TopdcChoice::Two:
      return {wa + wb + wc, third - wa, third - wc};
    case TopdcChoice::Three:
      return {wa + wb + wc, third - wb, third - wa};
  }
  return {};
}

Carriers carrier_wavenumbers(const CentralFrequencies& f, SourceKind kind, TopdcChoice choice) {
  const Carriers w = carrier_frequencies(f, kind, choice);
  return {w.pump / kSpeedOfLight, w.prime / kSpeedOfLight, w.dprime / kSpeedOfLight};
}

ReducedParameters attach_carriers(ReducedParameters r, const CentralFrequencies& f,
                                  SourceKind kind) {
  const Carriers k = carrier_wavenumbers(f, kind, r.choice);
  r.k_p0 = k.pump;
  r.k0_prime = k.prime;
  r.k0_dprime = k.dprime;
  return r;
}

double cosine_argument(const ReducedParameters& r) {
  return r.k_p0 * r.delta_L + r.k0_prime * r.delta_L_prime + r.k0_dprime * r.delta_L_dprime +
         r.delta_phi;
}

Triple cpdc_forward(const Triple& v) {
  const double wp = v[0], w1 = v[1], w2 = v[2];
  return {wp / 2 + w1 / 2, wp / 4 - w1 / 4 + w2 / 2, wp / 4 - w1 / 4 - w2 / 2};
}

Triple cpdc_inverse(const Triple& abc) {
  return {abc[0] + abc[1] + abc[2], abc[0] - abc[1] - abc[2], abc[1] - abc[2]};
}

Triple topdc_forward(const Triple& v) {
  const double wp = v[0], w1 = v[1], w2 = v[2];
  return {wp / 3 + 2 * w1 / 3 + 2 * w2 / 3, wp / 3 - 2 * w1 / 3, wp / 3 - 2 * w2 / 3};
}

Triple topdc_inverse(const Triple& abc) {
  const double a = abc[0], b = abc[1], c = abc[2];
  return {a + b + c, (a + c) / 2 - b, (a + b) / 2 - c};
}

Matrix3 cpdc_forward_matrix() {
  return {{{0.5, 0.5, 0.0}, {0.25, -0.25, 0.5}, {0.25, -0.25, -0.5}}};
}

Matrix3 topdc_forward_matrix() {
  return {{{1.0 / 3, 2.0 / 3, 2.0 / 3}, {1.0 / 3, -2.0 / 3, 0.0}, {1.0 / 3, 0.0, -2.0 / 3}}};
}

Matrix2 choice_map(TopdcChoice choice) {
  switch (choice) {
    case TopdcChoice::One:
      return {};
    case TopdcChoice::Two:
      return {{-1.0, -1.0, 0.0, 1.0}};
    case TopdcChoice::Three:
      return {{1.0, 0.0, -1.0, -1.0}};
  }
  return {};
}

}  // namespace tpi
