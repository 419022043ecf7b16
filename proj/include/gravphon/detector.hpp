#pragma once

// Bar resonator model: material, geometry, longitudinal mode structure and the
// intrinsic rates (graviton emission/absorption, thermal excitation).

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gravphon/constants.hpp"
#include "gravphon/errors.hpp"

namespace gravphon {

struct Material {
  std::string name;
  double density = 0.0;      // kg/m^3
  double sound_speed = 0.0;  // m/s

  void validate() const {
    if (!(density > 0.0) || !std::isfinite(density))
      throw ConfigError("material '" + name + "': density must be > 0");
    if (!(sound_speed > 0.0) || !std::isfinite(sound_speed))
      throw ConfigError("material '" + name + "': sound_speed must be > 0");
  }
};

namespace materials {

// Niobium is the bar quoted with the spontaneous-emission estimate. The other
// entries are standard reference values for longitudinal sound speed and
// density, not fitted to anything.
inline Material niobium() { return {"niobium", 8570.0, 5.0e3}; }
inline Material aluminum() { return {"aluminum", 2700.0, 5.1e3}; }
inline Material beryllium() { return {"beryllium", 1850.0, 1.26e4}; }
inline Material sapphire() { return {"sapphire", 3980.0, 1.0e4}; }
inline Material superfluid_helium() { return {"superfluid_helium", 145.0, 238.0}; }

inline std::vector<Material> builtin() {
  return {niobium(), aluminum(), beryllium(), sapphire(), superfluid_helium()};
}

}  // namespace materials

/// Fractional mismatch tolerated between a quoted mass and rho*pi*R^2*L.
inline constexpr double kMassConsistencyTolerance = 0.20;

struct DetectorSpec {
  Material material;
  double length = 1.0;                // m
  std::optional<double> radius;       // m; absent when only the mass is known
  double mass = 0.0;                  // kg
  int mode = 1;                       // odd longitudinal mode index l
  double quality = 1e10;              // Q
  double temperature = 1e-3;          // K

  double geometric_mass() const {
    if (!radius) throw ConfigError("detector radius not set");
    return material.density * kPi * (*radius) * (*radius) * length;
  }

  double effective_mass() const { return 0.5 * mass; }

  void validate() const {
    material.validate();
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(length)) throw ConfigError("detector length must be > 0");
    if (radius && !positive(*radius)) throw ConfigError("detector radius must be > 0");
    if (!positive(mass)) throw ConfigError("detector mass must be > 0");
    if (!positive(quality)) throw ConfigError("detector quality factor must be > 0");
    if (!positive(temperature)) throw ConfigError("detector temperature must be > 0");
    if (mode < 1 || mode % 2 == 0)
      throw ConfigError("mode index must be an odd positive integer, got " +
                        std::to_string(mode));
    if (radius) {
      const double geo = geometric_mass();
      if (std::abs(mass - geo) > kMassConsistencyTolerance * geo)
        throw ConfigError("detector mass " + std::to_string(mass) +
                          " kg inconsistent with geometry (" + std::to_string(geo) +
                          " kg)");
    }
  }

  /// Cylinder whose mass follows from density and geometry.
  static DetectorSpec from_geometry(Material m, double length, double radius,
                                    int mode = 1) {
    DetectorSpec s;
    s.material = std::move(m);
    s.length = length;
    s.radius = radius;
    s.mode = mode;
    s.mass = s.geometric_mass();
    return s;
  }

  /// Bar of given mass whose length puts mode `mode` at angular frequency omega.
  static DetectorSpec for_frequency(Material m, double omega, double mass,
                                    int mode = 1) {
    DetectorSpec s;
    s.length = mode * kPi * m.sound_speed / omega;
    s.material = std::move(m);
    s.mass = mass;
    s.mode = mode;
    return s;
  }
};

/// omega_l = l pi v_s / L
inline double mode_frequency(const DetectorSpec& spec) {
  return spec.mode * kPi * spec.material.sound_speed / spec.length;
}

/// Spontaneous graviton emission rate of the first excited state,
/// 8 G M L^2 omega_l^4 / (l^4 pi^4 c^5).
inline double gamma_spontaneous(const DetectorSpec& spec,
                                const PhysicalConstants& k = kConstants) {
  const double w = mode_frequency(spec);
  const double l4 = std::pow(spec.mode, 4);
  return 8.0 * k.G * spec.mass * spec.length * spec.length * std::pow(w, 4) /
         (l4 * std::pow(kPi, 4) * std::pow(k.c, 5));
}

/// Geometric form 8 pi G rho v_s^4 R^2 / (L c^5); requires the radius. Only
/// valid for the fundamental-mode normalisation (the l-dependence cancels).
inline double gamma_spontaneous_geometric(const DetectorSpec& spec,
                                          const PhysicalConstants& k = kConstants) {
  if (!spec.radius) throw ConfigError("geometric spontaneous rate needs a radius");
  const double R = *spec.radius;
  const double vs = spec.material.sound_speed;
  return 8.0 * kPi * k.G * spec.material.density * std::pow(vs, 4) * R * R /
         (spec.length * std::pow(k.c, 5));
}

/// Stimulated 0 -> 1 rate in a resonant monochromatic wave of amplitude h0,
/// v_s^2 M h0^2 / (4 l^2 pi^3 hbar).
inline double gamma_stimulated(const DetectorSpec& spec, double h0,
                               const PhysicalConstants& k = kConstants) {
  if (h0 < 0.0) throw DomainError("strain amplitude must be >= 0");
  const double vs = spec.material.sound_speed;
  const double l2 = static_cast<double>(spec.mode) * spec.mode;
  return vs * vs * spec.mass * h0 * h0 / (4.0 * l2 * std::pow(kPi, 3) * k.hbar);
}

/// Same rate written through the mode frequency,
/// M L^2 omega_l^2 h0^2 / (4 l^4 pi^5 hbar).
inline double gamma_stimulated_modal(const DetectorSpec& spec, double h0,
                                     const PhysicalConstants& k = kConstants) {
  const double w = mode_frequency(spec);
  const double l4 = std::pow(spec.mode, 4);
  return spec.mass * spec.length * spec.length * w * w * h0 * h0 /
         (4.0 * l4 * std::pow(kPi, 5) * k.hbar);
}

/// Bose-Einstein occupation 1/(exp(hbar omega / k_B T) - 1).
inline double thermal_occupation(double temperature, double omega,
                                 const PhysicalConstants& k = kConstants) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  if (!(omega > 0.0)) throw DomainError("frequency must be > 0");
  const double x = k.hbar * omega / (k.k_B * temperature);
  if (x > 700.0) return std::exp(-x);
  return 1.0 / std::expm1(x);
}

/// gamma_th = omega nbar / Q, at the mode frequency unless overridden.
inline double gamma_thermal(const DetectorSpec& spec,
                            std::optional<double> omega_override = std::nullopt,
                            const PhysicalConstants& k = kConstants) {
  const double w = omega_override.value_or(mode_frequency(spec));
  return w * thermal_occupation(spec.temperature, w, k) / spec.quality;
}

struct Lifetime {
  double seconds = 0.0;
  bool regime_valid = true;  // false when k_B T is not >> hbar omega
};

/// Number-state lifetime hbar Q / (k_B T), valid for k_B T >> hbar omega.
inline Lifetime fock_lifetime(const DetectorSpec& spec,
                              const PhysicalConstants& k = kConstants) {
  const double kT = k.k_B * spec.temperature;
  const double hw = k.hbar * mode_frequency(spec);
  return {k.hbar * spec.quality / kT, kT > 10.0 * hw};
}

/// Looks up a built-in material by name (case-sensitive).
inline std::optional<Material> find_material(std::string_view name,
                                             const std::vector<Material>& table =
                                                 materials::builtin()) {
  for (const auto& m : table)
    if (m.name == name) return m;
  return std::nullopt;
}

}  // namespace gravphon
