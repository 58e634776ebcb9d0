#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tpi/constants.hpp"
#include "tpi/oracle.hpp"

using tpi::DelayTriple;
using tpi::JointSpectralDensity;
using tpi::OracleConfig;
using tpi::SourceModel;
using tpi::SpectralDensity;

namespace {

constexpr double kSig = 1e13;  // rad/s

SourceModel gaussian_source(double pump_sigma = 0.5 * kSig,
                            tpi::CentralFrequencies f = tpi::CentralFrequencies::from_wavelengths(
                                1000e-9, 1900e-9, 2100e-9)) {
  return SourceModel::cpdc(f, SpectralDensity::gaussian(pump_sigma),
                           JointSpectralDensity::separable(SpectralDensity::gaussian(kSig),
                                                           SpectralDensity::gaussian(1.5 * kSig)));
}

OracleConfig grid(std::size_t n, double m = 8.0) {
  OracleConfig c;
  c.n_pump = c.n_prime = c.n_dprime = n;
  c.support_multiplier = m;
  return c;
}

std::vector<DelayTriple> delay_cube(int half) {
  std::vector<DelayTriple> out;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j)
      for (int k = -half; k <= half; ++k) out.push_back({i / kSig, j / kSig, k / kSig});
  return out;
}

}  // namespace

TEST(Oracle, ZeroDelayGivesTwo) {
  const auto t = tpi::interference_term_3d(gaussian_source(), {}, 0.0, grid(64));
  EXPECT_NEAR(t.term, 2.0, 1e-10);
  EXPECT_NEAR(tpi::factorized_term(gaussian_source(), {}, 0.0), 2.0, 1e-15);
}

TEST(Oracle, GaussianMatchesFactorized) {
  const auto src = gaussian_source();
  const tpi::OracleEngine engine(src, grid(96));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(-2.5 / kSig, 2.5 / kSig), ph(-3, 3);
  for (int i = 0; i < 40; ++i) {
    const DelayTriple d{t(rng), t(rng), t(rng)};
    const double dphi = ph(rng);
    EXPECT_NEAR(engine.term(d, dphi), tpi::factorized_term(src, d, dphi), 2e-5);
  }
}

TEST(Oracle, NoCouplingErrorVanishesAtSmallRatio) {
  const auto rows =
      tpi::factorization_error_sweep(gaussian_source(), delay_cube(1), {0.01}, 0.0, grid(64), 2);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LT(rows[0].max_error, 1e-6);
}

TEST(Oracle, LinearShiftBreaksFactorization) {
  auto cfg = grid(64);
  cfg.coupling = tpi::PumpCoupling::linear_shift(1.0);
  const std::vector<double> ratios = {1.0, 0.3, 0.1, 0.03, 0.01};
  const auto rows =
      tpi::factorization_error_sweep(gaussian_source(), delay_cube(2), ratios, 0.0, cfg, 4);
  ASSERT_EQ(rows.size(), ratios.size());
  EXPECT_GT(rows.front().max_error, 1e-2);
  EXPECT_LT(rows.back().max_error, 1e-3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(rows[i].max_error, rows[i - 1].max_error + 1e-6) << "ratio " << ratios[i];
  }
}

TEST(Oracle, LinearShiftMatchesAnalyticShiftedProduct) {
  // With a prime-axis shift s * p, the exact integral is
  // gamma_pm(t', t'') * gamma_p(t + s t'), so only the pump factor moves.
  auto cfg = grid(96);
  cfg.coupling = tpi::PumpCoupling::linear_shift(0.7);
  const auto src = gaussian_source(0.8 * kSig);
  const tpi::OracleEngine engine(src, cfg);
  for (const DelayTriple& d : {DelayTriple{0.4 / kSig, -1.1 / kSig, 0.6 / kSig},
                               DelayTriple{-1.0 / kSig, 0.5 / kSig, 0.0}}) {
    const auto pm = tpi::gamma_prime(src.phase_matching, d.delta_tau_prime, d.delta_tau_dprime);
    const auto gp = tpi::gamma_pump(src.pump, d.delta_tau + 0.7 * d.delta_tau_prime);
    const auto expected = pm.value() * gp.value();
    EXPECT_LT(std::abs(engine.integral(d) - expected), 1e-9);
  }
}

TEST(Oracle, TrapezoidConvergesAtSecondOrder) {
  // A truncated support leaves nonzero endpoint slopes, so the trapezoid
  // error is O(h^2).
  const auto src = gaussian_source();
  const DelayTriple d{0.5 / kSig, -0.7 / kSig, 0.3 / kSig};
  const double t1 = tpi::OracleEngine(src, grid(33, 4.0)).term(d, 0.2);
  const double t2 = tpi::OracleEngine(src, grid(65, 4.0)).term(d, 0.2);
  const double t3 = tpi::OracleEngine(src, grid(129, 4.0)).term(d, 0.2);
  const double order = std::log2(std::abs(t1 - t2) / std::abs(t2 - t3));
  EXPECT_GT(order, 1.8);
  EXPECT_LT(order, 2.2);
}

TEST(Oracle, EvenDensitiesGiveRealIntegral) {
  const auto src = gaussian_source();
  const tpi::OracleEngine engine(src, grid(64));
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(-3 / kSig, 3 / kSig);
  for (int i = 0; i < 30; ++i) {
    EXPECT_LT(std::abs(engine.integral({t(rng), t(rng), t(rng)}).imag()), 1e-10 * 2.0);
  }
}

TEST(Oracle, CpdcExchangeSymmetry) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> lam(1500e-9, 2500e-9), t(-2 / kSig, 2 / kSig), ph(-3, 3);
  for (int i = 0; i < 10; ++i) {
    const double la = 900e-9, lb = lam(rng), lc = lam(rng);
    const auto s1 = gaussian_source(0.5 * kSig, tpi::CentralFrequencies::from_wavelengths(la, lb, lc));
    const auto s2 = gaussian_source(0.5 * kSig, tpi::CentralFrequencies::from_wavelengths(la, lc, lb));
    const DelayTriple d{t(rng), t(rng), t(rng)};
    const DelayTriple dn{d.delta_tau, d.delta_tau_prime, -d.delta_tau_dprime};
    const double dphi = ph(rng);
    const double a = tpi::OracleEngine(s1, grid(48)).term(d, dphi);
    const double b = tpi::OracleEngine(s2, grid(48)).term(dn, dphi);
    EXPECT_NEAR(a, b, 1e-10);
  }
}

TEST(Oracle, RefinementFlag) {
  auto fine = grid(64);
  fine.check_refinement = true;
  const DelayTriple d{0.3 / kSig, 0.2 / kSig, -0.4 / kSig};
  const auto good = tpi::interference_term_3d(gaussian_source(), d, 0.0, fine);
  EXPECT_FALSE(good.grid_too_coarse);
  EXPECT_LT(good.refinement_change, 1e-8);

  const auto lor = SourceModel::cpdc(
      tpi::CentralFrequencies::from_wavelengths(1000e-9, 2000e-9, 2000e-9),
      SpectralDensity::lorentzian(kSig),
      JointSpectralDensity::separable(SpectralDensity::lorentzian(kSig),
                                      SpectralDensity::gaussian(kSig)));
  auto coarse = grid(32, 4.0);
  coarse.check_refinement = true;
  const auto bad = tpi::interference_term_3d(lor, d, 0.0, coarse);
  EXPECT_TRUE(bad.grid_too_coarse) << bad.refinement_change;
}

TEST(Oracle, ConfigValidation) {
  EXPECT_THROW(grid(16).validate(), std::invalid_argument);
  EXPECT_THROW(grid(64, 2.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(grid(32, 4.0).validate());
  EXPECT_THROW(tpi::factorization_error_sweep(gaussian_source(), {{}}, {0.0}, 0.0, grid(32)),
               std::invalid_argument);
}
