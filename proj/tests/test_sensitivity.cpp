#include <gtest/gtest.h>

#include <random>

#include "gravphon/sensitivity.hpp"

using namespace gravphon;

namespace {

DetectorSpec bar(double mass, double vs, double T = 1e-3, double Q = 1e10) {
  DetectorSpec s;
  s.material = {"test", 2700.0, vs};
  s.length = 1.0;
  s.mass = mass;
  s.temperature = T;
  s.quality = Q;
  return s;
}

}  // namespace

TEST(Sensitivity, GravitonNumber) {
  const double n = graviton_number(1e-21, 2 * kPi * 150);
  EXPECT_NEAR(n / 3.85282713850795074e36, 1.0, 1e-12);
  EXPECT_NEAR(n / 4e36, 1.0, 0.1);
  EXPECT_NEAR(graviton_number(2e-21, 2 * kPi * 150) / n, 4.0, 1e-12);
  EXPECT_NEAR(graviton_number(1e-21, 4 * kPi * 150) / n, 0.25, 1e-12);
  EXPECT_THROW(graviton_number(0.0, 1.0), DomainError);
}

TEST(Sensitivity, GoldenRule) {
  const auto s = bar(1800, 5.1e3);
  EXPECT_EQ(golden_rule_stimulated(s, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(golden_rule_stimulated(s, 1.0), gamma_spontaneous(s));
  const double w = mode_frequency(s);
  EXPECT_NEAR(golden_rule_stimulated(s, graviton_number(5e-22, w)), 1.0, 0.3);
  EXPECT_THROW(golden_rule_stimulated(s, -1.0), DomainError);
}

TEST(Sensitivity, GoldenRuleMatchesClassicalRateRandomSpecs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    DetectorSpec s;
    s.material = {"r", 1000 + 9000 * u(rng), 200 + 15000 * u(rng)};
    s.length = 0.1 + 5 * u(rng);
    s.mass = 1 + 5000 * u(rng);
    s.mode = 1 + 2 * static_cast<int>(4 * u(rng));
    const double h0 = std::pow(10.0, -23 + 3 * u(rng));
    const double w = mode_frequency(s);
    EXPECT_NEAR(golden_rule_stimulated(s, graviton_number(h0, w)) / gamma_stimulated(s, h0), 1.0,
                1e-9);
  }
}

TEST(Sensitivity, CharacteristicStrain) {
  const auto s = bar(1100, 5.1e3);
  EXPECT_NEAR(characteristic_strain(s) / 7.73623987606732615e-23, 1.0, 1e-12);
  auto s2 = s;
  s2.temperature *= 4;
  EXPECT_NEAR(characteristic_strain(s2) / characteristic_strain(s), 2.0, 1e-12);
  s2 = s;
  s2.quality *= 4;
  EXPECT_NEAR(characteristic_strain(s2) / characteristic_strain(s), 0.5, 1e-12);
  s2 = s;
  s2.mass *= 4;
  EXPECT_NEAR(characteristic_strain(s2) / characteristic_strain(s), 0.5, 1e-12);
}

TEST(Sensitivity, RateBalanceDefinesCharacteristicStrain) {
  const auto s = bar(1100, 5.1e3);
  const double hc = characteristic_strain(s);
  EXPECT_NEAR(wavepacket_stimulated_rate(s, hc) / gamma_thermal_classical(s), 1.0, 1e-9);
  // the classical thermal rate is the high-temperature form of omega nbar / Q
  auto t = DetectorSpec::for_frequency(s.material, 2 * kPi * 100, 1100);
  EXPECT_NEAR(gamma_thermal(t) / gamma_thermal_classical(t), 1.0, 1e-5);
}

TEST(Sensitivity, MinimumMonochromaticStrain) {
  const auto s = bar(1100, 5.1e3);
  const double hc = characteristic_strain(s);
  EXPECT_NEAR(min_strain_monochromatic(s, 1.0), hc / (2 * kPi), 1e-12 * hc);
  EXPECT_NEAR(min_strain_monochromatic(s, 4.0) / min_strain_monochromatic(s, 1.0), 0.5, 1e-12);
  for (double nc : {1.0, 37.0, 1e4}) {
    const double h0 = min_strain_monochromatic(s, nc);
    EXPECT_NEAR(hc / (2 * kPi * h0 * std::sqrt(nc)), 1.0, 1e-12);
    // rate balance: Gamma_mc(h0) = k_B T / (hbar Q)
    EXPECT_NEAR(monochromatic_rate(s, h0, nc) / gamma_thermal_classical(s), 1.0, 1e-9);
  }
  EXPECT_THROW(min_strain_monochromatic(s, 0.5), DomainError);
}

TEST(Sensitivity, ClassicalTimeDelay) {
  auto s = DetectorSpec::from_geometry(materials::aluminum(), 1.0, 0.5);
  const double w = 2 * kPi * 100;
  const double tau = classical_timedelay(s, 2e-22, w);
  EXPECT_NEAR(tau / 5.32169373266505394e-27, 1.0, 1e-12);
  EXPECT_NEAR(classical_timedelay(s, 4e-22, w) / tau, 0.25, 1e-12);
  auto s2 = DetectorSpec::from_geometry(materials::aluminum(), 1.0, 1.0);
  EXPECT_NEAR(classical_timedelay(s2, 2e-22, w) / tau, 0.25, 1e-12);
  s.radius.reset();
  EXPECT_THROW(classical_timedelay(s, 2e-22, w), ConfigError);
}

TEST(Sensitivity, Curve) {
  DetectorSpec tmpl;
  tmpl.material = materials::aluminum();
  tmpl.radius = 0.3;
  tmpl.temperature = 1e-3;
  tmpl.quality = 1e10;  // Q/T = 1e13 per kelvin
  tmpl.mass = 1.0;
  const auto pts = sensitivity_curve(tmpl, {50, 100, 200, 400, 800}, "al");
  ASSERT_EQ(pts.size(), 5u);
  // mass falls as 1/f, so h_c rises monotonically
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GT(pts[i].h_c, pts[i - 1].h_c);
  auto doubled = tmpl;
  doubled.quality *= 2;
  const auto pts2 = sensitivity_curve(doubled, {50, 100, 200, 400, 800});
  for (std::size_t i = 0; i < pts.size(); ++i)
    EXPECT_NEAR(pts[i].h_c / pts2[i].h_c, std::sqrt(2.0), 1e-12);
  const auto single = sensitivity_curve(tmpl, {100});
  DetectorSpec at100 = tmpl;
  at100.length = kPi * tmpl.material.sound_speed / (2 * kPi * 100);
  at100.mass = at100.geometric_mass();
  EXPECT_DOUBLE_EQ(single[0].h_c, characteristic_strain(at100));
  EXPECT_THROW(sensitivity_curve(tmpl, {100, 50}), DomainError);
}
