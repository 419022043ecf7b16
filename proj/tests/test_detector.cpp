#include <gtest/gtest.h>

#include "gravphon/detector.hpp"

using namespace gravphon;

namespace {

DetectorSpec niobium_bar() { return DetectorSpec::from_geometry(materials::niobium(), 1.0, 0.5); }

DetectorSpec aluminum_1800() {
  DetectorSpec s;
  s.material = materials::aluminum();
  s.length = 1.0;
  s.mass = 1800.0;
  return s;
}

}  // namespace

TEST(Detector, ModeFrequencyOfUnitBar) {
  auto s = niobium_bar();
  EXPECT_DOUBLE_EQ(mode_frequency(s), kPi * 5.0e3);
  s.mode = 3;
  EXPECT_DOUBLE_EQ(mode_frequency(s), 3.0 * kPi * 5.0e3);
}

TEST(Detector, ForFrequencyInvertsModeFrequency) {
  const double w = 2 * kPi * 100;
  for (int l : {1, 3, 5}) {
    auto s = DetectorSpec::for_frequency(materials::beryllium(), w, 10.0, l);
    EXPECT_NEAR(mode_frequency(s) / w, 1.0, 1e-14);
  }
}

TEST(Detector, ValidateRejectsEvenModeAndBadValues) {
  auto s = niobium_bar();
  s.mode = 2;
  EXPECT_THROW(s.validate(), ConfigError);
  s = niobium_bar();
  s.mass *= 1.5;  // 50% off the geometric mass
  EXPECT_THROW(s.validate(), ConfigError);
  s = niobium_bar();
  s.mass *= 1.1;
  EXPECT_NO_THROW(s.validate());
  s = niobium_bar();
  s.temperature = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = niobium_bar();
  s.material.sound_speed = -1;
  EXPECT_THROW(s.validate(), ConfigError);
}

// Frozen from a 30-digit evaluation of 8 G M L^2 omega^4 / (pi^4 c^5).
TEST(Detector, SpontaneousRateNiobium) {
  const auto s = niobium_bar();
  EXPECT_NEAR(gamma_spontaneous(s) / 9.27561932340070855e-34, 1.0, 1e-12);
  EXPECT_NEAR(gamma_spontaneous_geometric(s) / gamma_spontaneous(s), 1.0, 1e-12);
}

TEST(Detector, SpontaneousRateScalesAsL3AtFixedRadius) {
  auto a = DetectorSpec::from_geometry(materials::niobium(), 1.0, 0.5);
  auto b = DetectorSpec::from_geometry(materials::niobium(), 2.0, 0.5);
  // M ~ L, omega ~ 1/L  =>  M L^2 omega^4 ~ L^-1
  EXPECT_NEAR(gamma_spontaneous(b) / gamma_spontaneous(a), 0.5, 1e-12);
}

TEST(Detector, StimulatedRateAluminum) {
  const auto s = aluminum_1800();
  EXPECT_NEAR(gamma_stimulated(s, 5e-22) / 0.894884726407835108, 1.0, 1e-12);
  EXPECT_NEAR(gamma_stimulated(s, 1e-21) / gamma_stimulated(s, 5e-22), 4.0, 1e-12);
  EXPECT_EQ(gamma_stimulated(s, 0.0), 0.0);
  EXPECT_THROW(gamma_stimulated(s, -1e-22), DomainError);
}

TEST(Detector, StimulatedModalFormAgrees) {
  auto s = aluminum_1800();
  for (int l : {1, 3, 7}) {
    s.mode = l;
    EXPECT_NEAR(gamma_stimulated_modal(s, 3e-22) / gamma_stimulated(s, 3e-22), 1.0, 1e-12);
  }
}

TEST(Detector, ThermalOccupation) {
  const double w = 2 * kPi * 100;
  EXPECT_NEAR(thermal_occupation(1e-3, w) / 208365.691361345631, 1.0, 1e-12);
  // k_B T >> hbar omega: nbar ~ k_B T / (hbar omega) - 1/2
  const double x = kConstants.hbar * w / (kConstants.k_B * 1e-3);
  EXPECT_NEAR(thermal_occupation(1e-3, w), 1.0 / x - 0.5, 1e-6);
  // deep quantum regime: exp(-x) without overflow; x = 705 is still representable
  const double w705 = 705.0 * kConstants.k_B * 1e-3 / kConstants.hbar;
  EXPECT_NEAR(thermal_occupation(1e-3, w705) / std::exp(-705.0), 1.0, 1e-9);
  EXPECT_EQ(thermal_occupation(1e-12, 2 * kPi * 1e9), 0.0);
  EXPECT_THROW(thermal_occupation(0.0, w), DomainError);
}

TEST(Detector, ThermalRateAndLifetime) {
  auto s = DetectorSpec::for_frequency(materials::aluminum(), 2 * kPi * 100, 1800.0);
  s.quality = 1e10;
  s.temperature = 1e-3;
  EXPECT_NEAR(gamma_thermal(s) / 0.0130920025048192336, 1.0, 1e-10);
  const auto life = fock_lifetime(s);
  EXPECT_NEAR(life.seconds / 76.382325775776465, 1.0, 1e-12);
  EXPECT_TRUE(life.regime_valid);
  s.temperature = 1e-9;
  EXPECT_FALSE(fock_lifetime(s).regime_valid);
}

TEST(Detector, MaterialLookup) {
  EXPECT_TRUE(find_material("beryllium").has_value());
  EXPECT_DOUBLE_EQ(find_material("beryllium")->sound_speed, 1.26e4);
  EXPECT_FALSE(find_material("unobtainium").has_value());
}
