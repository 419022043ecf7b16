#pragma once

#include <numbers>

namespace gravphon {

/// CODATA 2018 values (SI). Every module reads constants from here.
struct PhysicalConstants {
  double G = 6.67430e-11;          // m^3 kg^-1 s^-2
  double c = 2.99792458e8;         // m/s
  double hbar = 1.054571817e-34;   // J s
  double k_B = 1.380649e-23;       // J/K
  double solar_mass = 1.98847e30;  // kg
};

inline constexpr PhysicalConstants kConstants{};

inline constexpr const char* kConstantsVersion = "CODATA-2018";
inline constexpr const char* kVersion = "1.0.0";

inline constexpr double kPi = std::numbers::pi;

}  // namespace gravphon
