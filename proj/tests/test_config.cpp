#include <gtest/gtest.h>

#include <sstream>

#include "gravphon/config.hpp"

using namespace gravphon;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const char* kMinimal = R"(
[detector]
material = aluminum
length = 1.0
mass = 1800

[source]
type = monochromatic
h0 = 1e-22
duration = 5
)";

const char* kChirpOptimal = R"(
[detector]
material = beryllium
frequency = 100
mass = optimal

[source]
type = chirp
h0 = 2e-22
chirp_mass = 1.19
center = 50
duration = 4
)";

}  // namespace

TEST(Config, IniBasics) {
  std::istringstream in("# top\n[a]\nx = 1 ; trailing\n\n[b]\ny=two words\n");
  const auto doc = parse_ini(in);
  EXPECT_EQ(doc.at("a").at("x").value, "1");
  EXPECT_EQ(doc.at("a").at("x").line, 3u);
  EXPECT_EQ(doc.at("b").at("y").value, "two words");
  std::istringstream dup("[a]\nx=1\nx=2\n");
  try {
    parse_ini(dup);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream orphan("x = 1\n");
  EXPECT_THROW(parse_ini(orphan), ParseError);
}

TEST(Config, MinimalMonochromaticGetsDefaults) {
  const RunConfig c = parse(kMinimal);
  EXPECT_EQ(c.detector.mode, 1);
  EXPECT_EQ(c.measurement.dim, 30);
  EXPECT_EQ(c.measurement.record_stride, 3);
  EXPECT_EQ(c.measurement.dt, 1e-3);
  EXPECT_EQ(c.measurement.t_m, 2.0);
  EXPECT_EQ(c.measurement.t_meas, 40.0);
  EXPECT_EQ(c.measurement.duration, 80.0);
  EXPECT_EQ(c.source_type, SourceType::monochromatic);
  // frequency defaults to the detector's own mode
  const auto& w = std::get<MonochromaticWave>(*c.source);
  EXPECT_NEAR(w.frequency / c.omega(), 1.0, 1e-15);
  EXPECT_EQ(w.support.length(), 5.0);
}

TEST(Config, FrequencySetsLength) {
  const RunConfig c = parse(kChirpOptimal);
  EXPECT_NEAR(c.omega() / (2 * kPi * 100), 1.0, 1e-14);
  EXPECT_NEAR(c.detector.length, 12600.0 / 200.0, 1e-12);
}

TEST(Config, OptimalMassEqualsDirectCall) {
  const RunConfig c = parse(kChirpOptimal);
  ASSERT_TRUE(c.mass_optimal);
  const auto chirp = resonant_chirp(1.19 * kConstants.solar_mass, 2e-22, 2 * kPi * 100, 50.0, 4.0);
  const double w = c.omega();
  const double chi = chi_quadrature(chirp, w, default_chirp_window(chirp, w)).value;
  EXPECT_EQ(c.optimal_chi, chi);
  EXPECT_EQ(c.detector.mass, optimal_mass(materials::beryllium(), chi, w, 1));

  std::string analytic = kChirpOptimal;
  analytic.replace(analytic.find("mass = optimal"), 14, "mass = optimal\noptimal_method = analytic");
  const RunConfig a = parse(analytic);
  const double chi_an = chi_chirp_analytic(2e-22, chirp_rate_k(1.19 * kConstants.solar_mass), w).value;
  EXPECT_EQ(a.detector.mass, optimal_mass(materials::beryllium(), chi_an, w, 1));
  EXPECT_NEAR(a.detector.mass / optimal_mass_chirp_analytic(materials::beryllium(), 2e-22,
                                                             1.19 * kConstants.solar_mass, w),
              1.0, 1e-12);
}

TEST(Config, OptimalMassNeedsSource) {
  EXPECT_NE(error_of("[detector]\nmaterial = beryllium\nfrequency = 100\nmass = optimal\n")
                .find("requires a [source]"),
            std::string::npos);
}

TEST(Config, TypeErrorNamesKeyAndUnit) {
  const std::string e = error_of(std::string(kMinimal) + "[measurement]\ndt = fast\n");
  EXPECT_NE(e.find("measurement.dt"), std::string::npos) << e;
  EXPECT_NE(e.find(" s,"), std::string::npos) << e;
  EXPECT_NE(e.find("fast"), std::string::npos) << e;
}

TEST(Config, UnknownKeyNamesKeyAndSection) {
  const std::string e = error_of(std::string(kMinimal) + "[measurement]\ndtt = 1e-3\n");
  EXPECT_NE(e.find("dtt"), std::string::npos) << e;
  EXPECT_NE(e.find("[measurement]"), std::string::npos) << e;
  EXPECT_NE(e.find("line 12"), std::string::npos) << e;
  EXPECT_NE(error_of(std::string(kMinimal) + "[mesurement]\n").find("unknown section"),
            std::string::npos);
}

TEST(Config, MissingRequiredKeys) {
  EXPECT_NE(error_of("[detector]\nmaterial = niobium\nmass = 10\n").find("detector.length"),
            std::string::npos);
  EXPECT_NE(error_of("[detector]\nmaterial = niobium\nlength = 1\n").find("detector.mass"),
            std::string::npos);
  const std::string src = "[detector]\nmaterial = niobium\nlength = 1\nmass = 10\n[source]\n";
  EXPECT_NE(error_of(src + "type = chirp\nh0 = 1e-22\n").find("source.chirp_mass"), std::string::npos);
  EXPECT_NE(error_of(src + "type = monochromatic\nh0 = 1e-22\n").find("source.duration"),
            std::string::npos);
  EXPECT_NE(error_of("[source]\ntype = none\n").find("[detector]"), std::string::npos);
}

TEST(Config, InvalidValues) {
  EXPECT_THROW(parse(std::string(kMinimal) + "[measurement]\ndim = 1\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kMinimal) + "[measurement]\ndt = -1\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kMinimal) + "[measurement]\nseed = -3\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kMinimal) + "[measurement]\nthermal = maybe\n"), ConfigError);
  EXPECT_THROW(parse("[detector]\nmaterial = niobium\nlength = 1\nmass = 10\nmode = 2\n"), ConfigError);
  EXPECT_THROW(parse("[detector]\nmaterial = unobtainium\nlength = 1\nmass = 10\n"), ConfigError);
}

TEST(Config, ThermalSwitchUsesDetectorRate) {
  const RunConfig c = parse(std::string(kMinimal) + "[measurement]\nthermal = on\n");
  EXPECT_EQ(c.measurement.thermal_rate, gamma_thermal(c.detector));
  EXPECT_EQ(parse(kMinimal).measurement.thermal_rate, 0.0);
}

TEST(Config, MaterialTable) {
  std::istringstream in("name,density,sound_speed\n# comment\nlead, 11340, 1200\n");
  const auto t = parse_material_table(in);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].name, "lead");
  EXPECT_EQ(t[0].density, 11340.0);
  std::istringstream bad("lead,heavy,1200\n");
  try {
    parse_material_table(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  std::istringstream neg("lead,-1,1200\n");
  EXPECT_THROW(parse_material_table(neg), ParseError);
  EXPECT_THROW(load_material_table("/nonexistent.csv"), FormatError);
}

TEST(Config, InlineMaterial) {
  const RunConfig c = parse("[detector]\ndensity = 1000\nsound_speed = 300\nlength = 2\nmass = 5\n");
  EXPECT_EQ(c.detector.material.name, "custom");
  EXPECT_NEAR(c.omega(), kPi * 150.0, 1e-12);
  EXPECT_THROW(parse("[detector]\ndensity = 1000\nlength = 2\nmass = 5\n"), ConfigError);
}

TEST(Config, MetadataRoundTrip) {
  for (const char* text : {kMinimal, kChirpOptimal}) {
    const RunConfig c = parse(std::string(text) + "[measurement]\nseed = 99\nkappa = 0.01\n");
    std::stringstream meta;
    write_metadata(meta, c, "simulate");
    const std::string first = meta.str();
    EXPECT_NE(first.find("constants = CODATA-2018"), std::string::npos);
    EXPECT_NE(first.find("seed = 99"), std::string::npos);
    const RunConfig r = parse_config(meta);
    EXPECT_EQ(r.detector.mass, c.detector.mass);
    EXPECT_EQ(r.detector.length, c.detector.length);
    EXPECT_EQ(r.measurement.seed, 99u);
    EXPECT_EQ(r.measurement.kappa, 0.01);
    std::stringstream again;
    write_metadata(again, r, "simulate");
    // the optimal-mass note disappears once the mass is a plain number
    std::string a = first, b = again.str();
    const auto cut = [](std::string& s) {
      const auto p = s.find("mass_resolution");
      if (p != std::string::npos) s.erase(p, s.find('\n', p) - p + 1);
    };
    cut(a);
    EXPECT_EQ(a, b);
  }
}

TEST(Config, SensitivityGrid) {
  SensitivityGrid g{10.0, 1000.0, 3};
  const auto f = g.frequencies();
  ASSERT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f[0], 10.0);
  EXPECT_NEAR(f[1], 100.0, 1e-10);
  EXPECT_NEAR(f[2], 1000.0, 1e-10);
  EXPECT_THROW(parse(std::string(kMinimal) + "[sensitivity]\nf_min = 100\nf_max = 10\n"), ConfigError);
}
