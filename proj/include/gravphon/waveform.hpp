#pragma once

// Gravitational-wave drives: monochromatic waves, leading-order inspiral chirps
// and uniformly sampled strain series, each evaluable for h(t) and its second
// time derivative.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "gravphon/constants.hpp"
#include "gravphon/errors.hpp"

namespace gravphon {

struct Interval {
  double begin = -std::numeric_limits<double>::infinity();
  double end = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t >= begin && t <= end; }
  double length() const { return end - begin; }
  bool bounded() const { return std::isfinite(begin) && std::isfinite(end); }
};

struct StrainSample {
  double h = 0.0;
  double hddot = 0.0;
  bool in_support = true;
};

/// h(t) = h0 sin(nu t + phase) on `support`, zero elsewhere.
struct MonochromaticWave {
  double amplitude = 0.0;  // h0
  double frequency = 0.0;  // nu, rad/s
  double phase = 0.0;      // rad
  Interval support{};

  void validate() const {
    if (!(amplitude >= 0.0)) throw ConfigError("monochromatic amplitude must be >= 0");
    if (!(frequency > 0.0)) throw ConfigError("monochromatic frequency must be > 0");
  }
};

enum class AmplitudeModel { constant, nu_two_thirds };

/// How the chirp's second derivative is evaluated. `locally_monochromatic`
/// uses -nu(t)^2 h(t); `exact` differentiates A(t) sin(phi(t)) analytically.
enum class HddotModel { locally_monochromatic, exact };

/// k = (48/5) (G M_c / (2 c^3))^(5/3), the sweep constant of
/// dnu/dt = k nu^(11/3) for angular frequency nu.
inline double chirp_rate_k(double chirp_mass_kg, const PhysicalConstants& c = kConstants) {
  if (!(chirp_mass_kg > 0.0)) throw DomainError("chirp mass must be > 0");
  return 48.0 / 5.0 * std::pow(c.G * chirp_mass_kg / (2.0 * c.c * c.c * c.c), 5.0 / 3.0);
}

inline double coalescence_time(double nu0, double k) {
  return 3.0 / (8.0 * k * std::pow(nu0, 8.0 / 3.0));
}

namespace detail {
// 1 - (8/3) k t nu0^(8/3); the chirp exists while this is positive.
inline double chirp_base(double nu0, double k, double t) {
  return 1.0 - 8.0 / 3.0 * k * t * std::pow(nu0, 8.0 / 3.0);
}
}  // namespace detail

/// nu(t) = (nu0^(-8/3) - (8/3) k t)^(-3/8); t measured from the moment the
/// frequency equals nu0.
inline double chirp_frequency(double nu0, double k, double t) {
  const double u = detail::chirp_base(nu0, k, t);
  if (!(u > 0.0))
    throw DomainError("chirp evaluated at or after coalescence (t=" + std::to_string(t) + ")");
  return nu0 * std::pow(u, -3.0 / 8.0);
}

/// phi(t) = (3/(5k)) (nu0^(-5/3) - nu(t)^(-5/3)), written with expm1/log1p so
/// that the k -> 0 limit nu0 t is reached without cancellation.
inline double chirp_phase(double nu0, double k, double t) {
  if (k == 0.0) return nu0 * t;
  const double x = -8.0 / 3.0 * k * t * std::pow(nu0, 8.0 / 3.0);
  if (!(x > -1.0))
    throw DomainError("chirp evaluated at or after coalescence (t=" + std::to_string(t) + ")");
  return -3.0 / (5.0 * k) * std::pow(nu0, -5.0 / 3.0) * std::expm1(5.0 / 8.0 * std::log1p(x));
}

/// Time spent inside the resonance window, tau = 2 sqrt(2/k) omega^(-11/6).
inline double resonance_crossing_time(double k, double omega) {
  if (!(k > 0.0) || !(omega > 0.0)) throw DomainError("k and omega must be > 0");
  return 2.0 * std::sqrt(2.0 / k) * std::pow(omega, -11.0 / 6.0);
}

/// Time (from the nu0 reference) at which the chirp frequency equals omega.
inline double chirp_time_to_frequency(double nu0, double k, double omega) {
  return 3.0 / (8.0 * k) * (std::pow(nu0, -8.0 / 3.0) - std::pow(omega, -8.0 / 3.0));
}

/// Leading-order inspiral. Simulation time t maps to chirp time t - start_time;
/// the signal begins at start_time with angular frequency nu0. The amplitude equals `amplitude`
/// when the frequency equals `reference_frequency` (nu0 when unset).
struct ChirpSource {
  double chirp_mass = 0.0;  // kg
  double amplitude = 0.0;   // h0
  double nu0 = 0.0;         // rad/s
  double start_time = 0.0;  // s
  AmplitudeModel amplitude_model = AmplitudeModel::constant;
  HddotModel hddot_model = HddotModel::locally_monochromatic;
  std::optional<double> reference_frequency;
  Interval support{};

  double k() const { return chirp_rate_k(chirp_mass); }
  double frequency_at(double t) const { return chirp_frequency(nu0, k(), t - start_time); }
  double phase_at(double t) const { return chirp_phase(nu0, k(), t - start_time); }
  double coalescence() const { return start_time + coalescence_time(nu0, k()); }

  /// Simulation time at which the frequency crosses omega.
  double resonance_time(double omega) const {
    return start_time + chirp_time_to_frequency(nu0, k(), omega);
  }

  void validate() const {
    if (!(chirp_mass > 0.0)) throw ConfigError("chirp mass must be > 0");
    if (!(nu0 > 0.0)) throw ConfigError("chirp initial frequency must be > 0");
    if (!(amplitude >= 0.0)) throw ConfigError("chirp amplitude must be >= 0");
  }
};

/// Chirp whose frequency crosses omega at `center`, cut to a window of
/// `duration` seconds around that time.
inline ChirpSource resonant_chirp(double chirp_mass, double h0, double omega, double center,
                                  double duration,
                                  AmplitudeModel model = AmplitudeModel::constant) {
  ChirpSource c;
  c.chirp_mass = chirp_mass;
  c.amplitude = h0;
  const double k = chirp_rate_k(chirp_mass);
  const double half = 0.5 * duration;
  c.nu0 = std::pow(std::pow(omega, -8.0 / 3.0) + 8.0 / 3.0 * k * half, -3.0 / 8.0);
  c.start_time = center - half;
  c.amplitude_model = model;
  c.reference_frequency = omega;
  c.support = {center - half, center + half};
  if (!(c.support.end < c.coalescence()))
    throw DomainError("chirp window extends past coalescence");
  return c;
}

/// Uniformly sampled strain; zero outside [t0, t0 + (n-1) dt].
struct SampledStrain {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> samples;

  double t_end() const { return t0 + dt * static_cast<double>(samples.size() - 1); }
  Interval support() const { return {t0, t_end()}; }

  void validate() const {
    if (!(dt > 0.0)) throw FormatError("sample spacing must be > 0");
    if (samples.size() < 3) throw FormatError("need at least 3 strain samples");
  }

  /// Second difference at node i; one-sided at the ends.
  double hddot_node(std::size_t i) const {
    const std::size_t n = samples.size();
    const double inv = 1.0 / (dt * dt);
    const auto& h = samples;
    if (i > 0 && i + 1 < n) return (h[i - 1] - 2.0 * h[i] + h[i + 1]) * inv;
    if (n >= 4) {
      if (i == 0) return (2.0 * h[0] - 5.0 * h[1] + 4.0 * h[2] - h[3]) * inv;
      return (2.0 * h[n - 1] - 5.0 * h[n - 2] + 4.0 * h[n - 3] - h[n - 4]) * inv;
    }
    return (h[0] - 2.0 * h[1] + h[2]) * inv;
  }
};

using StrainSignal = std::variant<MonochromaticWave, ChirpSource, SampledStrain>;

namespace detail {

inline StrainSample sample(const MonochromaticWave& w, double t) {
  if (!w.support.contains(t)) return {0.0, 0.0, false};
  const double h = w.amplitude * std::sin(w.frequency * t + w.phase);
  return {h, -w.frequency * w.frequency * h, true};
}

inline StrainSample sample(const ChirpSource& c, double t) {
  if (!c.support.contains(t) || t < c.start_time || !(t < c.coalescence()))
    return {0.0, 0.0, false};
  const double k = c.k();
  const double tau = t - c.start_time;
  const double nu = chirp_frequency(c.nu0, k, tau);
  const double phi = chirp_phase(c.nu0, k, tau);
  double A = c.amplitude;
  const double nu_ref = c.reference_frequency.value_or(c.nu0);
  if (c.amplitude_model == AmplitudeModel::nu_two_thirds)
    A *= std::pow(nu / nu_ref, 2.0 / 3.0);
  const double s = std::sin(phi);
  const double h = A * s;
  if (c.hddot_model == HddotModel::locally_monochromatic) return {h, -nu * nu * h, true};

  // d/dt: nu' = k nu^(11/3); for A ~ nu^(2/3): A' = (2/3) A nu'/nu,
  // A'' = (2/3) A [nu''/nu - (1/3) (nu'/nu)^2] with nu'' = (11/3) k nu^(8/3) nu'.
  const double co = std::cos(phi);
  const double nud = k * std::pow(nu, 11.0 / 3.0);
  double Ad = 0.0, Add = 0.0;
  if (c.amplitude_model == AmplitudeModel::nu_two_thirds) {
    const double nudd = 11.0 / 3.0 * k * std::pow(nu, 8.0 / 3.0) * nud;
    const double r = nud / nu;
    Ad = 2.0 / 3.0 * A * r;
    Add = 2.0 / 3.0 * A * (nudd / nu - r * r / 3.0);
  }
  const double hdd = Add * s + 2.0 * Ad * nu * co + A * (nud * co - nu * nu * s);
  return {h, hdd, true};
}

inline StrainSample sample(const SampledStrain& s, double t) {
  const std::size_t n = s.samples.size();
  if (n < 3 || !(t >= s.t0) || !(t <= s.t_end())) return {0.0, 0.0, false};
  const double x = (t - s.t0) / s.dt;
  std::size_t i = static_cast<std::size_t>(std::floor(x));
  if (i >= n - 1) i = n - 2;
  const double f = x - static_cast<double>(i);
  const double h = (1.0 - f) * s.samples[i] + f * s.samples[i + 1];
  const double hdd = (1.0 - f) * s.hddot_node(i) + f * s.hddot_node(i + 1);
  return {h, hdd, true};
}

}  // namespace detail

/// h(t) and its second derivative; (0, 0) with in_support=false outside the
/// signal's support.
inline StrainSample strain_sample(const StrainSignal& signal, double t) {
  return std::visit([t](const auto& s) { return detail::sample(s, t); }, signal);
}

/// Largest angular frequency the signal carries over [a, b]; sets the
/// quadrature resolution.
inline double max_signal_frequency(const StrainSignal& signal, double a, double b) {
  struct Visitor {
    double a, b;
    double operator()(const MonochromaticWave& w) const { return w.frequency; }
    double operator()(const ChirpSource& c) const {
      const double end = std::min(b, c.support.end);
      const double start = std::max(a, c.support.begin);
      if (end < start) return c.nu0;
      return std::max(c.nu0, c.frequency_at(end));
    }
    double operator()(const SampledStrain& s) const { return kPi / s.dt; }
  };
  return std::visit(Visitor{a, b}, signal);
}

/// Support of the signal (unbounded for an unwindowed monochromatic wave).
inline Interval signal_support(const StrainSignal& signal) {
  struct Visitor {
    Interval operator()(const MonochromaticWave& w) const { return w.support; }
    Interval operator()(const ChirpSource& c) const {
      return {std::max(c.support.begin, c.start_time), std::min(c.support.end, c.coalescence())};
    }
    Interval operator()(const SampledStrain& s) const { return s.support(); }
  };
  return std::visit(Visitor{}, signal);
}

inline void validate_signal(const StrainSignal& signal) {
  std::visit([](const auto& s) { s.validate(); }, signal);
}

// --- Strain files -----------------------------------------------------------
//
// Two whitespace-separated columns (time [s], strain) per line. Lines starting
// with '#' are comments; a comment of the form "# dt = <value>" pins the
// spacing exactly (used by write_strain_series for lossless round trips).

inline constexpr double kSpacingJitter = 1e-6;

inline SampledStrain parse_strain_series(std::istream& in) {
  std::vector<double> times, values;
  std::optional<double> declared_dt;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream c(line.substr(first + 1));
      std::string key, eq;
      double v;
      if (c >> key >> eq >> v && key == "dt" && eq == "=") declared_dt = v;
      continue;
    }
    std::istringstream ls(line);
    double t, h;
    std::string extra;
    if (!(ls >> t >> h) || (ls >> extra))
      throw ParseError("expected two numeric columns (time, strain)", lineno);
    if (!std::isfinite(t) || !std::isfinite(h)) throw ParseError("non-finite value", lineno);
    times.push_back(t);
    values.push_back(h);
  }
  if (times.empty()) throw FormatError("strain file contains no samples");
  if (times.size() < 3) throw FormatError("strain file needs at least 3 samples");

  std::vector<double> diffs(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) diffs[i] = times[i + 1] - times[i];
  std::vector<double> sorted = diffs;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (!(median > 0.0)) throw FormatError("strain times must be strictly increasing");
  for (std::size_t i = 0; i < diffs.size(); ++i)
    if (std::abs(diffs[i] - median) > kSpacingJitter * median)
      throw FormatError("non-uniform sample spacing at sample " + std::to_string(i + 1));

  SampledStrain s;
  s.t0 = times.front();
  s.dt = median;
  if (declared_dt) {
    if (std::abs(*declared_dt - median) > kSpacingJitter * median)
      throw FormatError("declared dt disagrees with sample times");
    s.dt = *declared_dt;
  }
  s.samples = std::move(values);
  return s;
}

inline SampledStrain load_strain_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open strain file '" + path + "'");
  return parse_strain_series(in);
}

inline void write_strain_series(std::ostream& out, const SampledStrain& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s.dt);
  out << "# time_s strain\n# dt = " << buf << '\n';
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    char row[96];
    std::snprintf(row, sizeof row, "%.17g %.17g\n", s.t0 + s.dt * static_cast<double>(i),
                  s.samples[i]);
    out << row;
  }
}

/// Samples an analytic signal on [a, b] with spacing dt.
inline SampledStrain sample_signal(const StrainSignal& signal, double a, double b, double dt) {
  SampledStrain s;
  s.t0 = a;
  s.dt = dt;
  const auto n = static_cast<std::size_t>(std::floor((b - a) / dt + 1e-9)) + 1;
  s.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    s.samples.push_back(strain_sample(signal, a + dt * static_cast<double>(i)).h);
  return s;
}

}  // namespace gravphon
