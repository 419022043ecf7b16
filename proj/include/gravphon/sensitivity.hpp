#pragma once

// Bookkeeping between the classical and graviton pictures, and strain
// sensitivity of a bar limited by thermal excitations.

#include <cmath>
#include <string>
#include <vector>

#include "gravphon/constants.hpp"
#include "gravphon/detector.hpp"
#include "gravphon/errors.hpp"

namespace gravphon {

/// Gravitons in a wave of amplitude h0 at angular frequency nu:
/// energy density c^2 h0^2 nu^2 / (32 pi G) over hbar nu per (c/nu)^3.
inline double graviton_number(double h0, double nu, const PhysicalConstants& c = kConstants) {
  if (!(h0 > 0.0) || !(nu > 0.0)) throw DomainError("graviton_number needs h0 > 0 and nu > 0");
  return h0 * h0 * std::pow(c.c, 5) / (32.0 * kPi * c.G * c.hbar * nu * nu);
}

/// Golden-rule absorption with n quanta in the mode:
/// (n / l^4) 8 G M L^2 omega_l^4 / (pi^4 c^5).
inline double golden_rule_stimulated(const DetectorSpec& spec, double n_gravitons,
                                     const PhysicalConstants& c = kConstants) {
  if (!(n_gravitons >= 0.0)) throw DomainError("graviton count must be >= 0");
  return n_gravitons * gamma_spontaneous(spec, c);
}

/// Wavepacket absorption rate h0^2 M v_s^2 / (4 hbar pi^3), using the density
/// of states with the single-graviton volume (c/omega)^3.
inline double wavepacket_stimulated_rate(const DetectorSpec& spec, double h0,
                                         const PhysicalConstants& c = kConstants) {
  const double vs = spec.material.sound_speed;
  return h0 * h0 * spec.mass * vs * vs / (4.0 * c.hbar * std::pow(kPi, 3));
}

/// Classical (k_B T >> hbar omega) thermal excitation rate k_B T / (hbar Q).
/// The strain thresholds below balance against this form.
inline double gamma_thermal_classical(const DetectorSpec& spec,
                                      const PhysicalConstants& c = kConstants) {
  return c.k_B * spec.temperature / (c.hbar * spec.quality);
}

/// h_c = 2 pi sqrt(pi k_B T / (M v_s^2 Q))
inline double characteristic_strain(const DetectorSpec& spec,
                                    const PhysicalConstants& c = kConstants) {
  spec.validate();
  const double vs = spec.material.sound_speed;
  return 2.0 * kPi *
         std::sqrt(kPi * c.k_B * spec.temperature / (spec.mass * vs * vs * spec.quality));
}

/// Monochromatic excitation rate after N_c cycles, h0^2 N_c M v_s^2 / (pi hbar).
inline double monochromatic_rate(const DetectorSpec& spec, double h0, double cycles,
                                 const PhysicalConstants& c = kConstants) {
  const double vs = spec.material.sound_speed;
  return h0 * h0 * cycles * spec.mass * vs * vs / (kPi * c.hbar);
}

/// Smallest monochromatic h0 whose excitation rate over N_c cycles reaches the
/// thermal rate: sqrt(pi k_B T / (M v_s^2 Q N_c)).
inline double min_strain_monochromatic(const DetectorSpec& spec, double cycles,
                                       const PhysicalConstants& c = kConstants) {
  if (!(cycles >= 1.0)) throw DomainError("number of cycles must be >= 1");
  spec.validate();
  const double vs = spec.material.sound_speed;
  return std::sqrt(kPi * c.k_B * spec.temperature /
                   (spec.mass * vs * vs * spec.quality * cycles));
}

/// Time for a classical wave to deliver hbar omega through the bar's cross
/// section: flux j = c E / 4 with E = c^2 omega^2 h0^2 / (32 pi G).
inline double classical_timedelay(const DetectorSpec& spec, double h0, double omega,
                                  const PhysicalConstants& c = kConstants) {
  if (!spec.radius) throw ConfigError("classical_timedelay needs the detector radius");
  if (!(h0 > 0.0) || !(omega > 0.0)) throw DomainError("h0 and omega must be > 0");
  const double energy = c.c * c.c * omega * omega * h0 * h0 / (32.0 * kPi * c.G);
  const double flux = c.c * energy / 4.0;
  const double area = kPi * (*spec.radius) * (*spec.radius);
  return c.hbar * omega / (flux * area);
}

struct SensitivityPoint {
  double frequency = 0.0;  // Hz
  double h_c = 0.0;
  std::string label;
};

/// h_c over a frequency grid (Hz). Each point uses a bar of the template's
/// material with the mode tuned to that frequency; if the template has a
/// radius the mass follows from the implied length, otherwise it is kept.
inline std::vector<SensitivityPoint> sensitivity_curve(const DetectorSpec& tmpl,
                                                       const std::vector<double>& frequencies_hz,
                                                       const std::string& label = "",
                                                       const PhysicalConstants& c = kConstants) {
  for (std::size_t i = 1; i < frequencies_hz.size(); ++i)
    if (!(frequencies_hz[i] > frequencies_hz[i - 1]))
      throw DomainError("frequency grid must be strictly ascending");
  std::vector<SensitivityPoint> out;
  out.reserve(frequencies_hz.size());
  for (double f : frequencies_hz) {
    if (!(f > 0.0)) throw DomainError("frequencies must be > 0");
    DetectorSpec s = tmpl;
    s.length = s.mode * kPi * s.material.sound_speed / (2.0 * kPi * f);
    if (s.radius) s.mass = s.geometric_mass();
    out.push_back({f, characteristic_strain(s, c), label});
  }
  return out;
}

}  // namespace gravphon
