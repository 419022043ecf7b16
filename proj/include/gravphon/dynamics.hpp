#pragma once

// Semiclassical excitation of a resonator mode by a strain drive. The
// interaction-picture evolution is a displacement D(beta) with
//   beta = -i (L / (pi^2 l^2)) sqrt(M / (hbar omega)) * int hddot(s) e^{i omega s} ds,
// so everything observable follows from the complex Fourier-type integral of
// hddot at the mode frequency; its modulus is chi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gravphon/constants.hpp"
#include "gravphon/detector.hpp"
#include "gravphon/errors.hpp"
#include "gravphon/waveform.hpp"

namespace gravphon {

enum class ChiMethod { quadrature, monochromatic_closed_form, chirp_analytic, stationary_phase };

inline const char* to_string(ChiMethod m) {
  switch (m) {
    case ChiMethod::quadrature: return "quadrature";
    case ChiMethod::monochromatic_closed_form: return "monochromatic_closed_form";
    case ChiMethod::chirp_analytic: return "chirp_analytic";
    case ChiMethod::stationary_phase: return "stationary_phase";
  }
  return "?";
}

struct ChiResult {
  double value = 0.0;  // strain (rad/s)^2
  ChiMethod method = ChiMethod::quadrature;
  Interval window{};
  bool regime_warning = false;  // formula used outside its approximation regime
};

struct QuadratureOptions {
  double rel_tol = 1e-6;
  int panels_per_period = 20;  // minimum panels per shortest period
  int max_refinements = 14;
  int sign = +1;  // e^{sign * i omega s}
};

/// Complex integral of hddot(s) e^{+-i omega s} over `window` by composite
/// Simpson with Richardson refinement. The starting panel width resolves the
/// faster of omega and the signal's own frequency at 20 panels per period.
inline std::complex<double> fourier_integral(const StrainSignal& signal, double omega,
                                             Interval window,
                                             const QuadratureOptions& opt = {}) {
  const Interval sup = signal_support(signal);
  const double a = std::max(window.begin, sup.begin);
  const double b = std::min(window.end, sup.end);
  if (!std::isfinite(a) || !std::isfinite(b))
    throw DomainError("integration window must be bounded");
  if (!(b > a)) return {0.0, 0.0};

  const double fmax = std::max(omega, max_signal_frequency(signal, a, b));
  const double hmax = 2.0 * kPi / fmax / opt.panels_per_period;
  auto panels = static_cast<std::size_t>(std::ceil((b - a) / hmax));
  panels = std::max<std::size_t>(panels, 2);

  const double sgn = opt.sign >= 0 ? 1.0 : -1.0;
  auto f = [&](double s) {
    const double hdd = strain_sample(signal, s).hddot;
    return hdd * std::polar(1.0, sgn * omega * s);
  };

  // Nodes are reused across refinements: level n has 2n+1 Simpson nodes.
  std::vector<std::complex<double>> nodes(2 * panels + 1);
  double scale = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = f(a + (b - a) * static_cast<double>(i) / static_cast<double>(nodes.size() - 1));
    scale += std::abs(nodes[i]);
  }
  auto simpson = [&](const std::vector<std::complex<double>>& y) {
    const std::size_t m = y.size() - 1;
    const double h = (b - a) / static_cast<double>(m);
    std::complex<double> acc = y.front() + y.back();
    for (std::size_t i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
    return acc * (h / 3.0);
  };

  std::complex<double> prev = simpson(nodes);
  for (int level = 0; level < opt.max_refinements; ++level) {
    std::vector<std::complex<double>> finer(2 * nodes.size() - 1);
    const std::size_t m = finer.size() - 1;
    for (std::size_t i = 0; i < finer.size(); ++i) {
      if (i % 2 == 0) {
        finer[i] = nodes[i / 2];
      } else {
        finer[i] = f(a + (b - a) * static_cast<double>(i) / static_cast<double>(m));
        scale += std::abs(finer[i]);
      }
    }
    const std::complex<double> cur = simpson(finer);
    const std::complex<double> extrap = cur + (cur - prev) / 15.0;
    const double l1 = scale * (b - a) / static_cast<double>(2 * m);  // rough int |f|
    const double diff = std::abs(cur - prev);
    if (diff <= opt.rel_tol * std::abs(extrap) || diff <= 1e-14 * l1 || l1 == 0.0)
      return extrap;
    prev = cur;
    nodes = std::move(finer);
  }
  throw NumericError("chi quadrature did not converge", std::abs(prev));
}

/// chi = |int_window hddot(s) e^{i omega s} ds| by quadrature.
inline ChiResult chi_quadrature(const StrainSignal& signal, double omega, Interval window,
                                const QuadratureOptions& opt = {}) {
  return {std::abs(fourier_integral(signal, omega, window, opt)), ChiMethod::quadrature,
          window, false};
}

inline double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

/// Rotating-wave closed form for h0 sin(nu t) integrated over [0, t]:
/// chi ~ h0 nu^2 (t/2) |sinc(delta t / 2)|, delta = omega - nu.
inline ChiResult chi_monochromatic(double h0, double nu, double omega, double t) {
  const double delta = omega - nu;
  ChiResult r;
  r.value = std::abs(h0 * nu * nu * 0.5 * t * sinc(0.5 * delta * t));
  r.method = ChiMethod::monochromatic_closed_form;
  r.window = {0.0, t};
  r.regime_warning = std::abs(delta) > 0.1 * (omega + nu);
  return r;
}

/// Slow-chirp estimate chi ~ h0 sqrt(2/k) omega^(1/6), i.e. h0 omega^2 tau / 2
/// with tau the resonance crossing time.
inline ChiResult chi_chirp_analytic(double h0, double k, double omega) {
  ChiResult r;
  r.value = h0 * std::sqrt(2.0 / k) * std::pow(omega, 1.0 / 6.0);
  r.method = ChiMethod::chirp_analytic;
  r.regime_warning = omega * resonance_crossing_time(k, omega) < 10.0;
  return r;
}

/// Default chi window for a chirp: +-5 crossing times around resonance,
/// clipped to the chirp's support.
inline Interval default_chirp_window(const ChirpSource& chirp, double omega) {
  const double tres = chirp.resonance_time(omega);
  const double tau = resonance_crossing_time(chirp.k(), omega);
  Interval w{tres - 5.0 * tau, tres + 5.0 * tau};
  const Interval sup = signal_support(chirp);
  w.begin = std::max(w.begin, sup.begin);
  w.end = std::min(w.end, sup.end);
  return w;
}

/// Stationary-phase estimate of chi for a chirp: the rotating term
/// (nu^2 A / 2) e^{i(omega s - phi(s))} is expanded to second order about
/// nu(s*) = omega and integrated as a Gaussian, giving
/// chi ~ (1/2) omega^2 A(s*) sqrt(2 pi / nudot(s*)).
inline ChiResult chi_stationary_phase(const ChirpSource& chirp, double omega,
                                      std::optional<Interval> window = std::nullopt) {
  const Interval w = window.value_or(signal_support(chirp));
  if (!(omega >= chirp.nu0))
    throw DomainError("no stationary point: omega is below the chirp's initial frequency");
  const double k = chirp.k();
  const double sstar = chirp.resonance_time(omega);
  if (!w.contains(sstar) || !signal_support(chirp).contains(sstar))
    throw DomainError("no stationary point inside the window");
  double A = chirp.amplitude;
  if (chirp.amplitude_model == AmplitudeModel::nu_two_thirds)
    A *= std::pow(omega / chirp.reference_frequency.value_or(chirp.nu0), 2.0 / 3.0);
  const double nudot = k * std::pow(omega, 11.0 / 3.0);
  ChiResult r;
  r.value = 0.5 * omega * omega * A * std::sqrt(2.0 * kPi / nudot);
  r.method = ChiMethod::stationary_phase;
  r.window = w;
  r.regime_warning = omega * resonance_crossing_time(k, omega) < 10.0;
  return r;
}

/// (L / (pi^2 l^2)) sqrt(M / (hbar omega)): maps chi to |beta|.
inline double beta_coupling(const DetectorSpec& spec, const PhysicalConstants& c = kConstants) {
  const double w = mode_frequency(spec);
  const double l2 = static_cast<double>(spec.mode) * spec.mode;
  return spec.length / (kPi * kPi * l2) * std::sqrt(spec.mass / (c.hbar * w));
}

struct BetaAmplitude {
  std::complex<double> value;
  double chi = 0.0;
  double omega = 0.0;
  Interval window{};

  double magnitude() const { return std::abs(value); }
};

/// beta = -i * coupling * int hddot e^{i omega s} ds over the window, with the
/// mode sign (-1)^((l-1)/2) of the linear coupling.
inline BetaAmplitude displacement_beta(const DetectorSpec& spec, const StrainSignal& signal,
                                       Interval window, const QuadratureOptions& opt = {}) {
  const double w = mode_frequency(spec);
  const std::complex<double> I = fourier_integral(signal, w, window, opt);
  const double mode_sign = ((spec.mode - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  const std::complex<double> beta =
      std::complex<double>(0.0, -1.0) * (mode_sign * beta_coupling(spec)) * I;
  return {beta, std::abs(I), w, window};
}

/// Poisson occupation e^{-|beta|^2} |beta|^{2n} / n!, evaluated in log space.
inline double excitation_probability(std::complex<double> beta, int n) {
  if (n < 0) throw DomainError("occupation must be >= 0");
  const double b2 = std::norm(beta);
  if (b2 == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-b2 + n * std::log(b2) - std::lgamma(n + 1.0));
}

/// Mass that makes |beta| = 1 for the given chi at angular frequency omega:
/// M = pi^2 l^2 hbar omega^3 / (v_s^2 chi^2).
inline double optimal_mass(const Material& material, double chi, double omega, int mode = 1,
                           const PhysicalConstants& c = kConstants) {
  if (!(chi > 0.0)) throw DomainError("optimal mass needs chi > 0");
  const double vs = material.sound_speed;
  const double l2 = static_cast<double>(mode) * mode;
  return kPi * kPi * l2 * c.hbar * std::pow(omega, 3) / (vs * vs * chi * chi);
}

/// Closed-form optimum for a slowly sweeping chirp,
/// M ~ (24 pi^2 / 5) hbar / (h0^2 v_s^2) (G M_c / (2 c^3))^(5/3) omega^(8/3).
inline double optimal_mass_chirp_analytic(const Material& material, double h0,
                                          double chirp_mass, double omega,
                                          const PhysicalConstants& c = kConstants) {
  if (!(h0 > 0.0)) throw DomainError("optimal mass needs h0 > 0");
  const double vs = material.sound_speed;
  return 24.0 * kPi * kPi / 5.0 * c.hbar / (h0 * h0 * vs * vs) *
         std::pow(c.G * chirp_mass / (2.0 * c.c * c.c * c.c), 5.0 / 3.0) *
         std::pow(omega, 8.0 / 3.0);
}

/// Rotating-wave excitation probability of a monochromatic wave after time t,
/// (L^2 / (4 pi^4 l^4)) (M / (omega hbar)) h0^2 nu^4 t^2 sinc^2((omega - nu) t / 2).
inline double threshold_probability(const DetectorSpec& spec, double h0, double nu, double t,
                                     const PhysicalConstants& c = kConstants) {
  const double w = mode_frequency(spec);
  const double L = spec.length;
  const double l4 = std::pow(spec.mode, 4);
  const double s = sinc(0.5 * (w - nu) * t);
  return L * L / (4.0 * std::pow(kPi, 4) * l4) * spec.mass / (w * c.hbar) * h0 * h0 *
         std::pow(nu, 4) * t * t * s * s;
}

}  // namespace gravphon
