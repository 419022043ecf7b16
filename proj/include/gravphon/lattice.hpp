#pragma once

// Atomistic check of the continuum bar: N+1 identical atoms at x_n = n a / 2
// (n odd, -N <= n <= N) with nearest-neighbour springs and free ends. Normal
// modes are sin(l pi n / (2(N+1))) for odd l and cos(...) for even l.

#include <cmath>
#include <complex>
#include <vector>

#include "gravphon/constants.hpp"
#include "gravphon/errors.hpp"
#include "gravphon/waveform.hpp"

namespace gravphon {

struct ChainSpec {
  int N = 99;             // odd; the chain has N + 1 atoms
  double m = 1.0;         // atom mass, kg
  double a = 1.0;         // lattice spacing, m
  double omega_D = 1.0;   // rad/s

  int atoms() const { return N + 1; }
  double total_mass() const { return m * atoms(); }
  double length() const { return a * atoms(); }
  double sound_speed() const { return a * omega_D; }

  void validate() const {
    if (N < 3 || N % 2 == 0) throw ConfigError("chain N must be odd and >= 3");
    if (!(m > 0.0) || !(a > 0.0) || !(omega_D > 0.0))
      throw ConfigError("chain m, a and omega_D must be > 0");
  }

  /// Chain with the given total mass, length and sound speed.
  static ChainSpec matching(int N, double mass, double length, double sound_speed) {
    ChainSpec c;
    c.N = N;
    c.m = mass / (N + 1);
    c.a = length / (N + 1);
    c.omega_D = sound_speed / c.a;
    c.validate();
    return c;
  }
};

/// Odd index n of atom j = 0..N.
inline int atom_label(const ChainSpec& c, int j) { return 2 * j - c.N; }

inline double atom_position(const ChainSpec& c, int j) { return 0.5 * c.a * atom_label(c, j); }

/// Mode shape of mode l at atom j.
inline double mode_shape(const ChainSpec& c, int l, int j) {
  const double arg = l * kPi * atom_label(c, j) / (2.0 * (c.N + 1));
  return l % 2 ? std::sin(arg) : std::cos(arg);
}

/// omega_l^2 = 2 omega_D^2 (1 - cos(l pi / (N + 1))), l = 0..N.
inline std::vector<double> normal_mode_frequencies(const ChainSpec& c) {
  c.validate();
  std::vector<double> w(static_cast<std::size_t>(c.N + 1));
  for (int l = 0; l <= c.N; ++l) {
    // 1 - cos x = 2 sin^2(x/2) avoids cancellation at small l.
    const double s = std::sin(l * kPi / (2.0 * (c.N + 1)));
    w[static_cast<std::size_t>(l)] = 2.0 * c.omega_D * s;
  }
  return w;
}

/// C_l = (m/2) sum_n x_n sin(l pi n / (2(N+1))), so the linear interaction is
/// H = -hddot C_l chi_l. Tends to (M L / pi^2) (-1)^((l-1)/2) / l^2.
inline double coupling_coefficient(const ChainSpec& c, int l) {
  c.validate();
  if (l < 1 || l > c.N) throw DomainError("mode index must lie in [1, N]");
  if (l % 2 == 0) throw DomainError("even modes have no linear coupling");
  double acc = 0.0;
  for (int j = 0; j <= c.N; ++j) acc += atom_position(c, j) * mode_shape(c, l, j);
  return 0.5 * c.m * acc;
}

inline double coupling_coefficient_continuum(double mass, double length, int l) {
  const double sign = ((l - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * mass * length / (kPi * kPi * l * l);
}

/// Kinetic energy of the chain for the given mode velocities chi_dot_l.
inline double chain_kinetic_energy(const ChainSpec& c, const std::vector<double>& mode_velocities) {
  if (mode_velocities.size() != static_cast<std::size_t>(c.N + 1))
    throw DomainError("need one velocity per mode");
  double ke = 0.0;
  for (int j = 0; j <= c.N; ++j) {
    double v = 0.0;
    for (int l = 0; l <= c.N; ++l) v += mode_velocities[static_cast<std::size_t>(l)] * mode_shape(c, l, j);
    ke += 0.5 * c.m * v * v;
  }
  return ke;
}

/// Mass of mode l read off the atomistic kinetic energy, KE = m_eff chi_dot^2 / 2.
inline double effective_mode_mass(const ChainSpec& c, int l = 1) {
  c.validate();
  if (l < 1 || l > c.N) throw DomainError("mode index must lie in [1, N]");
  double acc = 0.0;
  for (int j = 0; j <= c.N; ++j) acc += mode_shape(c, l, j) * mode_shape(c, l, j);
  return c.m * acc;
}

/// Largest deviation of sum_n phi_l(n) phi_l'(n) from (N+1)/2 delta_ll' over
/// l, l' in [1, N], relative to (N+1)/2.
inline double completeness_error(const ChainSpec& c) {
  c.validate();
  const double norm = 0.5 * (c.N + 1);
  double worst = 0.0;
  for (int l = 1; l <= c.N; ++l)
    for (int lp = l; lp <= c.N; ++lp) {
      double s = 0.0;
      for (int j = 0; j <= c.N; ++j) s += mode_shape(c, l, j) * mode_shape(c, lp, j);
      worst = std::max(worst, std::abs(s - (l == lp ? norm : 0.0)) / norm);
    }
  return worst;
}

struct ChainEvolution {
  std::vector<double> times;
  std::vector<double> amplitude;  // chi_l
  std::vector<double> velocity;   // chi_l dot
  double omega = 0.0;             // discrete omega_l
  double mode_mass = 0.0;         // M/2

  /// |beta| of a quantum oscillator with the same classical phase-space
  /// excursion: sqrt(m_eff omega / (2 hbar)) sqrt(chi^2 + chi_dot^2/omega^2).
  double beta_magnitude(std::size_t i, const PhysicalConstants& c = kConstants) const {
    const double q = amplitude[i], p = velocity[i] / omega;
    return std::sqrt(mode_mass * omega / (2.0 * c.hbar)) * std::sqrt(q * q + p * p);
  }
};

struct ChainEvolveOptions {
  int steps_per_period = 40;  // per shortest period 2 pi / (2 omega_D)
  int mode = 1;
  int record_every = 0;       // 0: about 50 samples per mode period
};

/// Velocity-Verlet integration of the forced chain from rest over `window`,
/// with force m (hddot/2) x_n on each atom; returns the projection onto mode l.
inline ChainEvolution evolve_chain(const ChainSpec& c, const StrainSignal& signal, Interval window,
                                   const ChainEvolveOptions& opt = {}) {
  c.validate();
  if (!window.bounded() || !(window.length() > 0.0))
    throw ConfigError("lattice evolution window must be bounded and non-empty");
  if (opt.steps_per_period < 40)
    throw ConfigError("time step must resolve 2 omega_D with >= 40 steps per period");
  const int l = opt.mode;
  if (l < 1 || l > c.N) throw DomainError("mode index must lie in [1, N]");

  const double shortest = 2.0 * kPi / (2.0 * c.omega_D);
  const auto nsteps =
      static_cast<std::size_t>(std::ceil(window.length() / (shortest / opt.steps_per_period)));
  const double dt = window.length() / static_cast<double>(nsteps);

  const int n = c.N + 1;
  std::vector<double> x(static_cast<std::size_t>(n)), xi(x.size(), 0.0), v(x.size(), 0.0),
      acc(x.size()), shape(x.size());
  for (int j = 0; j < n; ++j) {
    x[static_cast<std::size_t>(j)] = atom_position(c, j);
    shape[static_cast<std::size_t>(j)] = mode_shape(c, l, j);
  }
  const double w2 = c.omega_D * c.omega_D;
  auto accel = [&](double t) {
    const double g = 0.5 * strain_sample(signal, t).hddot;
    for (int j = 0; j < n; ++j) {
      const double left = xi[static_cast<std::size_t>(j > 0 ? j - 1 : j)];
      const double right = xi[static_cast<std::size_t>(j < n - 1 ? j + 1 : j)];
      const double self = xi[static_cast<std::size_t>(j)];
      acc[static_cast<std::size_t>(j)] = -w2 * (2.0 * self - left - right) + g * x[static_cast<std::size_t>(j)];
    }
  };

  ChainEvolution out;
  out.omega = normal_mode_frequencies(c)[static_cast<std::size_t>(l)];
  out.mode_mass = effective_mode_mass(c, l);
  const double proj = 2.0 / (c.N + 1);
  std::size_t every = opt.record_every > 0 ? static_cast<std::size_t>(opt.record_every)
                                           : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                 2.0 * kPi / out.omega / 50.0 / dt));
  auto record = [&](double t) {
    double q = 0.0, p = 0.0;
    for (int j = 0; j < n; ++j) {
      q += xi[static_cast<std::size_t>(j)] * shape[static_cast<std::size_t>(j)];
      p += v[static_cast<std::size_t>(j)] * shape[static_cast<std::size_t>(j)];
    }
    out.times.push_back(t);
    out.amplitude.push_back(proj * q);
    out.velocity.push_back(proj * p);
  };

  double t = window.begin;
  accel(t);
  record(t);
  for (std::size_t k = 1; k <= nsteps; ++k) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] += 0.5 * dt * acc[j];
      xi[j] += dt * v[j];
    }
    t = window.begin + dt * static_cast<double>(k);
    accel(t);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += 0.5 * dt * acc[j];
    if (k % every == 0 || k == nsteps) record(t);
  }
  return out;
}

/// Observed convergence order from errors e_i at sizes N_i (least squares
/// slope of -log e against log N).
inline double observed_order(const std::vector<double>& sizes, const std::vector<double>& errors) {
  if (sizes.size() != errors.size() || sizes.size() < 2)
    throw DomainError("need at least two (size, error) pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double lx = std::log(sizes[i]), ly = -std::log(errors[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace gravphon
