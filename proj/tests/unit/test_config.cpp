#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "tpi/config.hpp"
#include "tpi/constants.hpp"
#include "tpi/errors.hpp"

#ifndef TPI_DATA_DIR
#define TPI_DATA_DIR "tests/data"
#endif

namespace {

const std::string kSource = R"(source.type = cpdc
source.wavelength_a_nm = 1000
source.wavelength_b_nm = 2000
source.wavelength_c_nm = 2000
source.pump.shape = gaussian
source.pump.width = 1e13
source.pm.prime.shape = gaussian
source.pm.prime.width = 2e13
source.pm.dprime.shape = lorentzian
source.pm.dprime.width = 3e13
)";

const std::string kDirect = R"(geometry.delta_L = 1e-6
geometry.delta_L_prime = -2e-6
geometry.delta_L_dprime = 0
geometry.delta_phi = 0.5
)";

template <class E>
E capture(const std::string& text) {
  try {
    tpi::parse_config(text);
  } catch (const E& e) {
    return e;
  }
  ADD_FAILURE() << "expected an exception";
  throw std::runtime_error("no exception");
}

}  // namespace

TEST(Config, MinimalDirectForm) {
  const auto c = tpi::parse_config(kSource + kDirect);
  EXPECT_EQ(c.source.kind, tpi::SourceKind::Cpdc);
  EXPECT_FALSE(c.path.has_value());
  EXPECT_DOUBLE_EQ(c.reduced.delta_L, 1e-6);
  EXPECT_DOUBLE_EQ(c.reduced.delta_L_prime, -2e-6);
  EXPECT_DOUBLE_EQ(c.reduced.delta_phi, 0.5);
  // Pump frequency is derived from the photon wavelengths.
  const double wp = 2 * tpi::kPi * tpi::kSpeedOfLight / 500e-9;
  EXPECT_NEAR(c.source.centrals.omega_p0(), wp, 1e-12 * wp);
  EXPECT_NEAR(c.reduced.k_p0, 2 * tpi::kPi / 500e-9, 1e-3);
  EXPECT_DOUBLE_EQ(c.amps.c_mag_sq * (c.amps.K1_mag * c.amps.K1_mag + c.amps.K2_mag * c.amps.K2_mag),
                   1.0);
  EXPECT_EQ(c.precision, 12);
  EXPECT_FALSE(c.sweep.has_value());
  EXPECT_EQ(c.config_hash.size(), 16u);
}

TEST(Config, CommentsAndWhitespace) {
  const auto c = tpi::parse_config("# header\n\n" + kSource + "  geometry.delta_L = 2e-6  # um\n");
  EXPECT_DOUBLE_EQ(c.reduced.delta_L, 2e-6);
}

TEST(Config, GeometryOverspecified) {
  const auto e = capture<tpi::ValidationError>(kSource + kDirect + "geometry.length_a1 = 0.1\n");
  EXPECT_NE(std::string(e.what()).find("geometry overspecified"), std::string::npos);
}

TEST(Config, GeometryMissing) {
  const auto e = capture<tpi::ValidationError>(kSource);
  EXPECT_NE(std::string(e.what()).find("geometry missing"), std::string::npos);
}

TEST(Config, NegativeWavelengthNamesKey) {
  std::string text = kSource + kDirect;
  text.replace(text.find("= 2000"), 6, "= -2000");
  const auto e = capture<tpi::ValidationError>(text);
  EXPECT_EQ(e.key(), "source.wavelength_b_nm");
}

TEST(Config, ParseErrorCarriesLineAndKey) {
  auto e = capture<tpi::ParseError>(kSource + "geometry.delta_L = abc\n");
  EXPECT_EQ(e.line(), 11u);
  EXPECT_EQ(e.key(), "geometry.delta_L");

  e = capture<tpi::ParseError>(kSource + kDirect + "no equals sign\n");
  EXPECT_EQ(e.line(), 15u);

  e = capture<tpi::ParseError>(kSource + kDirect + "geometry.delta_L = 3\n");
  EXPECT_EQ(e.key(), "geometry.delta_L");
}

TEST(Config, UnknownKeyRejected) {
  const auto e = capture<tpi::ParseError>(kSource + kDirect + "geometry.delta_Q = 1\n");
  EXPECT_EQ(e.key(), "geometry.delta_Q");
  EXPECT_EQ(e.line(), 15u);
}

TEST(Config, EightLengthFormReduces) {
  const auto c = tpi::load_config(std::string(TPI_DATA_DIR) + "/cat2_lengths.cfg");
  ASSERT_TRUE(c.path.has_value());
  const auto r = tpi::reduce_cpdc(*c.path);
  EXPECT_DOUBLE_EQ(c.reduced.delta_L, r.delta_L);
  EXPECT_DOUBLE_EQ(c.reduced.delta_phi, 0.3);
  ASSERT_TRUE(c.sweep.has_value());
  EXPECT_EQ(c.sweep->variable, tpi::SweepVariable::DeltaL);
  EXPECT_EQ(c.sweep->n_points, 897u);
}

TEST(Config, TopdcChoiceAndCorrelatedDensity) {
  const auto c = tpi::load_config(std::string(TPI_DATA_DIR) + "/topdc_lengths.cfg");
  EXPECT_EQ(c.source.kind, tpi::SourceKind::Topdc);
  EXPECT_EQ(c.reduced.choice, tpi::TopdcChoice::Two);
  EXPECT_TRUE(std::holds_alternative<tpi::CorrelatedGaussian>(c.source.phase_matching.kind()));
  EXPECT_THROW(tpi::parse_config(kSource + kDirect + "geometry.choice = 2\n"),
               tpi::ValidationError);
}

TEST(Config, TabulatedFileRelativeToConfig) {
  const auto c = tpi::load_config(std::string(TPI_DATA_DIR) + "/dip.cfg");
  const auto& pm = c.source.phase_matching;
  // Unit-mass top hat on about +/- 2e13.
  EXPECT_NEAR(pm.total_mass(), 1.0, 1e-12);
  std::string text = kSource + kDirect;
  text.replace(text.find("shape = lorentzian"), 18, "shape = tabulated");
  text.replace(text.find("source.pm.dprime.width = 3e13"), 29,
               "source.pm.dprime.file = missing.dat");
  const auto e = capture<tpi::ValidationError>(text);
  EXPECT_EQ(e.key(), "source.pm.dprime.file");
}

TEST(Config, AmplitudeConventions) {
  auto c = tpi::parse_config(kSource + kDirect + "amplitudes.K1 = 1\namplitudes.K2 = 0.5\n"
                                                 "amplitudes.c_mag_sq = 2\n");
  EXPECT_DOUBLE_EQ(c.amps.c_mag_sq, 2.0);
  c = tpi::parse_config(kSource + kDirect + "amplitudes.C = 3\n");
  EXPECT_DOUBLE_EQ(c.amps.c_mag_sq, 1.5);
  EXPECT_THROW(
      tpi::parse_config(kSource + kDirect + "amplitudes.C = 3\namplitudes.c_mag_sq = 1\n"),
      tpi::ValidationError);
}

TEST(Config, ValidateSectionChecks) {
  EXPECT_THROW(tpi::parse_config(kSource + kDirect + "validate.n_pump = 16\n"),
               tpi::ValidationError);
  EXPECT_THROW(tpi::parse_config(kSource + kDirect + "validate.support_multiplier = 3\n"),
               tpi::ValidationError);
  const auto c = tpi::parse_config(kSource + kDirect +
                                   "validate.coupling = linear_shift\nvalidate.slope = 1\n"
                                   "validate.ratios = 1, 0.1,0.01\n");
  EXPECT_EQ(c.validate.oracle.coupling.kind, tpi::PumpCoupling::Kind::LinearShift);
  ASSERT_EQ(c.validate.ratios.size(), 3u);
  EXPECT_DOUBLE_EQ(c.validate.ratios[2], 0.01);
}

TEST(Config, HashIsStable) {
  EXPECT_EQ(tpi::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(tpi::fnv1a_hex("a"), "af63dc4c8601ec8c");
}
