#pragma once

// Time-continuous weak measurement of the mode's energy. Each timestep draws a
// homodyne-like readout r = <N> + sqrt(t_m/dt) xi, conditions the state on it
// with the Gaussian Kraus operator
//   M(r) = (2 pi t_m / dt)^(-1/4) exp[-dt (r - N)^2 / (4 t_m)],
// then applies the drive displacement D(dbeta) (plus optional noise). The drive
// enters in the interaction picture: dbeta = -i g(t) e^{i omega t} dt with
// g = (L / (pi^2 l^2)) sqrt(M / (hbar omega)) hddot(t); the free rotation is
// never applied because N-measurement and populations are invariant under it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gravphon/detector.hpp"
#include "gravphon/dynamics.hpp"
#include "gravphon/errors.hpp"
#include "gravphon/fock.hpp"
#include "gravphon/waveform.hpp"

namespace gravphon {

/// How the per-step variance of the random displacement scales with dt.
enum class KappaScaling {
  per_step_variance,  // Re, Im ~ Normal(0, kappa^2 / dt)
  diffusive,          // Re, Im ~ Normal(0, kappa^2 dt)
};

struct MeasurementConfig {
  double dt = 1e-3;        // s
  double t_m = 2.0;        // characteristic measurement time, s
  double t_meas = 40.0;    // run length before the mode is reset to |0>, s
  double duration = 80.0;  // total simulated time, s
  int dim = 30;
  double kappa = 0.0;
  KappaScaling kappa_scaling = KappaScaling::per_step_variance;
  double thermal_rate = 0.0;  // Hz; Poisson b^dagger jumps, off by default
  std::uint64_t seed = 1;
  int record_stride = 3;
  bool measure = true;         // false: no conditioning (t_m -> infinity)
  bool readout_noise = true;   // false: xi forced to 0
  bool check_invariants = false;
  double jump_threshold = 0.9;
  // confirmation window for a jump, s; unset means t_m / 2
  std::optional<double> jump_hold;

  double jump_hold_time() const { return jump_hold.value_or(0.5 * t_m); }
  /// The window expressed in recorded points.
  int jump_hold_points() const {
    return std::max(1, static_cast<int>(std::ceil(jump_hold_time() / (dt * record_stride) - 1e-9)));
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("measurement.dt must be > 0");
    if (!(t_m > 0.0)) throw ConfigError("measurement.t_m must be > 0");
    if (!(t_meas > dt)) throw ConfigError("measurement.t_meas must exceed dt");
    if (!(duration >= dt)) throw ConfigError("measurement.duration must be >= dt");
    if (dim < 2) throw ConfigError("measurement.dim must be >= 2");
    if (!(kappa >= 0.0)) throw ConfigError("measurement.kappa must be >= 0");
    if (!(thermal_rate >= 0.0)) throw ConfigError("measurement.thermal_rate must be >= 0");
    if (record_stride < 1) throw ConfigError("output.stride must be >= 1");
    if (!(jump_threshold > 0.0 && jump_threshold < 1.0))
      throw ConfigError("jump threshold must lie in (0, 1)");
    if (!(jump_hold_time() > 0.0)) throw ConfigError("measurement.jump_hold must be > 0");
  }
};

/// Seeded normal/uniform source owned by one trajectory.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finaliser; decorrelates sequential trajectory indices.
inline std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Diagonal Gaussian Kraus operator for readout r.
inline FockOperator measurement_operator(double r, double dt, double t_m, int dim) {
  if (!std::isfinite(r)) throw DomainError("readout must be finite");
  const double norm = std::pow(2.0 * kPi * t_m / dt, -0.25);
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const double d = r - n;
    m(n, n) = norm * std::exp(-dt * d * d / (4.0 * t_m));
  }
  return FockOperator(std::move(m));
}

inline double sample_readout(const QuantumState& rho, double dt, double t_m, Rng& rng,
                             bool noise = true) {
  const double xi = noise ? rng.normal() : 0.0;
  return rho.mean_number() + std::sqrt(t_m / dt) * xi;
}

enum class EventKind { jump_detected, reinit, gw_window_start, gw_window_end };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::jump_detected: return "jump_detected";
    case EventKind::reinit: return "reinit";
    case EventKind::gw_window_start: return "gw_window_start";
    case EventKind::gw_window_end: return "gw_window_end";
  }
  return "?";
}

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::jump_detected;
  friend bool operator==(const Event&, const Event&) = default;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> readout;
  std::vector<double> rho00, rho11, rho22;
  std::vector<Event> events;
  std::vector<double> final_populations;
  Complex accumulated_drive{0.0, 0.0};  // sum of dbeta since the last reset
  double max_trace_error = 0.0;         // largest |tr rho - 1| after any step

  std::size_t size() const { return times.size(); }
  bool detected() const {
    return std::any_of(events.begin(), events.end(),
                       [](const Event& e) { return e.kind == EventKind::jump_detected; });
  }
};

/// Jumps into |1>: rho11 >= threshold for at least `hold` consecutive
/// recorded points. The event carries the time the run began. The detector
/// re-arms only after rho11 falls below `rearm`, so a population hovering
/// near the threshold yields one event rather than a burst.
inline std::vector<Event> detect_jump(const TrajectoryRecord& rec, double threshold = 0.9,
                                      int hold = 3, double rearm = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("threshold must lie in (0, 1)");
  if (!(rearm > 0.0 && rearm <= threshold)) throw DomainError("rearm level must lie in (0, threshold]");
  std::vector<Event> out;
  int run = 0;
  bool fired = false;
  for (std::size_t i = 0; i < rec.rho11.size(); ++i) {
    if (rec.rho11[i] >= threshold) {
      ++run;
      if (run >= hold && !fired) {
        out.push_back({rec.times[i + 1 - static_cast<std::size_t>(run)], EventKind::jump_detected});
        fired = true;
      }
    } else {
      run = 0;
      if (rec.rho11[i] < rearm) fired = false;
    }
  }
  return out;
}

/// Per-trajectory evolution engine. Holds the immutable operator caches; the
/// state itself is passed in.
class MeasurementStepper {
 public:
  explicit MeasurementStepper(const MeasurementConfig& cfg)
      : cfg_(cfg), displacement_(cfg.dim), weights_(cfg.dim) {
    cfg_.validate();
    const Matrix a = annihilation_operator(cfg.dim).matrix();
    creation_ = a.adjoint();
  }

  const MeasurementConfig& config() const { return cfg_; }

  /// One timestep: readout, conditioning, displacement by dbeta (+ noise),
  /// optional thermal jump. Returns the readout.
  double step(QuantumState& s, Complex dbeta, Rng& rng) const {
    const double r = sample_readout(s, cfg_.dt, cfg_.t_m, rng, cfg_.readout_noise);
    if (cfg_.measure) condition(s, r);

    Complex disp = dbeta;
    if (cfg_.kappa > 0.0) {
      const double sigma = cfg_.kappa_scaling == KappaScaling::per_step_variance
                               ? cfg_.kappa / std::sqrt(cfg_.dt)
                               : cfg_.kappa * std::sqrt(cfg_.dt);
      const double re = rng.normal(), im = rng.normal();
      disp += Complex(sigma * re, sigma * im);
    }
    // D(gamma) D(dbeta) equals D(gamma + dbeta) up to a global phase.
    if (disp != Complex(0.0, 0.0)) apply_unitary(s, displacement_.matrix(disp));

    if (cfg_.thermal_rate > 0.0 && rng.uniform() < cfg_.thermal_rate * cfg_.dt)
      s = apply_normalized(s, FockOperator(creation_));

    if (cfg_.check_invariants) check_state(s);
    return r;
  }

 private:
  // rho_mn <- w_m w_n rho_mn / tr with w_n the Kraus diagonal, rescaled by its
  // largest entry (the normalisation cancels in the ratio).
  void condition(QuantumState& s, double r) const {
    const int d = cfg_.dim;
    double emax = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < d; ++n) {
      const double x = r - n;
      weights_(n) = -cfg_.dt * x * x / (4.0 * cfg_.t_m);
      emax = std::max(emax, weights_(n));
    }
    for (int n = 0; n < d; ++n) weights_(n) = std::exp(weights_(n) - emax);
    Matrix& rho = s.rho();
    double tr = 0.0;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) rho(i, j) *= weights_(i) * weights_(j);
      tr += rho(j, j).real();
    }
    if (!(tr > kTraceUnderflow) || !std::isfinite(tr))
      throw NumericError("trace underflow in measurement update", tr);
    rho /= tr;
  }

  MeasurementConfig cfg_;
  DisplacementFactory displacement_;
  Matrix creation_;
  mutable RealVector weights_;
};

/// Free-function form of a single update.
inline double step(QuantumState& s, const MeasurementConfig& cfg, Complex dbeta, Rng& rng) {
  return MeasurementStepper(cfg).step(s, dbeta, rng);
}

/// Drive increment over [t, t + dt]:
/// dbeta = -i int g(s) e^{i omega s} ds, g = coupling * hddot(s), over the
/// part of the step inside the signal support. Composite Simpson with panels
/// short enough that the fastest phase (omega + signal frequency) turns by at
/// most kMaxPanelPhase per panel; a single panel per step at omega dt ~ 0.6
/// loses ~1% of |beta| on a chirp tail.
class DriveIntegrator {
 public:
  static constexpr double kMaxPanelPhase = 0.3;

  DriveIntegrator(const DetectorSpec& spec, const StrainSignal& signal)
      : signal_(signal),
        omega_(mode_frequency(spec)),
        coupling_(beta_coupling(spec) * (((spec.mode - 1) / 2) % 2 == 0 ? 1.0 : -1.0)),
        support_(signal_support(signal)) {}

  Complex increment(double t, double dt) const {
    const double a = std::max(t, support_.begin), b = std::min(t + dt, support_.end);
    if (!(b > a)) return {0.0, 0.0};
    const double rate = omega_ + max_signal_frequency(signal_, a, b);
    const int m = std::max(1, static_cast<int>(std::ceil(rate * (b - a) / kMaxPanelPhase)));
    const double h = (b - a) / m;
    Complex acc = f(a) + f(b);
    for (int i = 0; i < m; ++i) acc += 4.0 * f(a + (i + 0.5) * h);
    for (int i = 1; i < m; ++i) acc += 2.0 * f(a + i * h);
    return Complex(0.0, -1.0) * acc * (h / 6.0);
  }

  const Interval& support() const { return support_; }
  double omega() const { return omega_; }

 private:
  Complex f(double s) const {
    return coupling_ * strain_sample(signal_, s).hddot * std::polar(1.0, omega_ * s);
  }

  const StrainSignal& signal_;
  double omega_;
  double coupling_;
  Interval support_;
};

/// Simulates one monitored trajectory from t = 0 to cfg.duration, resetting
/// the mode to `initial` (ground state by default) every t_meas seconds.
inline TrajectoryRecord run_trajectory(const DetectorSpec& spec, const StrainSignal& signal,
                                       const MeasurementConfig& cfg, std::uint64_t seed,
                                       std::optional<QuantumState> initial = std::nullopt) {
  const MeasurementStepper stepper(cfg);
  const DriveIntegrator drive(spec, signal);
  Rng rng(seed);
  const QuantumState start = initial.value_or(QuantumState(cfg.dim));
  if (start.dim() != cfg.dim) throw ConfigError("initial state dimension differs from dim");
  QuantumState s = start;

  const std::size_t n = cfg.steps();
  const auto reset_every =
      static_cast<std::size_t>(std::max<long long>(1, std::llround(cfg.t_meas / cfg.dt)));
  TrajectoryRecord rec;
  const std::size_t npts = n / static_cast<std::size_t>(cfg.record_stride) + 1;
  rec.times.reserve(npts);
  rec.readout.reserve(npts);
  rec.rho00.reserve(npts);
  rec.rho11.reserve(npts);
  rec.rho22.reserve(npts);

  const Interval sup = drive.support();
  const double t_end = static_cast<double>(n) * cfg.dt;
  if (sup.begin >= 0.0 && sup.begin <= t_end)
    rec.events.push_back({sup.begin, EventKind::gw_window_start});
  if (sup.end >= 0.0 && sup.end <= t_end) rec.events.push_back({sup.end, EventKind::gw_window_end});

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (k > 0 && k % reset_every == 0) {
      s = start;
      rec.accumulated_drive = {0.0, 0.0};
      rec.events.push_back({t, EventKind::reinit});
    }
    const Complex db = drive.increment(t, cfg.dt);
    rec.accumulated_drive += db;
    double r;
    try {
      r = stepper.step(s, db, rng);
    } catch (const NumericError& e) {
      throw NumericError("trajectory aborted at t=" + std::to_string(t) + ": " + e.what(),
                         e.last_estimate());
    }
    rec.max_trace_error = std::max(rec.max_trace_error, std::abs(s.trace() - 1.0));
    if (k % static_cast<std::size_t>(cfg.record_stride) == 0) {
      rec.times.push_back(t + cfg.dt);
      rec.readout.push_back(r);
      rec.rho00.push_back(s.population(0));
      rec.rho11.push_back(s.population(1));
      rec.rho22.push_back(s.population(2));
    }
  }
  for (const Event& e : detect_jump(rec, cfg.jump_threshold, cfg.jump_hold_points())) rec.events.push_back(e);
  std::stable_sort(rec.events.begin(), rec.events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  rec.final_populations.resize(static_cast<std::size_t>(cfg.dim));
  for (int i = 0; i < cfg.dim; ++i) rec.final_populations[static_cast<std::size_t>(i)] = s.population(i);
  return rec;
}

struct EnsembleSummary {
  std::size_t n_traj = 0;
  std::size_t detections = 0;
  std::vector<double> times;
  std::vector<double> mean_rho00, mean_rho11, mean_rho22;
  std::vector<double> mean_final_populations;
  double max_trace_error = 0.0;

  double detection_fraction() const {
    return n_traj ? static_cast<double>(detections) / static_cast<double>(n_traj) : 0.0;
  }
};

using TrajectorySink = std::function<void(std::size_t, const TrajectoryRecord&)>;

/// Runs n_traj independent trajectories seeded by trajectory_seed(base_seed, k).
/// Trajectories execute in parallel batches; the sink and the reduction see
/// them in index order, so results do not depend on the thread count.
inline EnsembleSummary run_ensemble(const DetectorSpec& spec, const StrainSignal& signal,
                                    const MeasurementConfig& cfg, std::size_t n_traj,
                                    std::uint64_t base_seed, const TrajectorySink& sink = {},
                                    unsigned threads = 0) {
  if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
  cfg.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  EnsembleSummary sum;
  sum.n_traj = n_traj;

  auto reduce = [&](std::size_t k, const TrajectoryRecord& rec) {
    if (sum.times.empty()) {
      sum.times = rec.times;
      sum.mean_rho00.assign(rec.size(), 0.0);
      sum.mean_rho11.assign(rec.size(), 0.0);
      sum.mean_rho22.assign(rec.size(), 0.0);
      sum.mean_final_populations.assign(rec.final_populations.size(), 0.0);
    }
    for (std::size_t i = 0; i < rec.size(); ++i) {
      sum.mean_rho00[i] += rec.rho00[i];
      sum.mean_rho11[i] += rec.rho11[i];
      sum.mean_rho22[i] += rec.rho22[i];
    }
    for (std::size_t i = 0; i < rec.final_populations.size(); ++i)
      sum.mean_final_populations[i] += rec.final_populations[i];
    if (rec.detected()) ++sum.detections;
    sum.max_trace_error = std::max(sum.max_trace_error, rec.max_trace_error);
    if (sink) sink(k, rec);
  };

  std::vector<TrajectoryRecord> batch;
  for (std::size_t first = 0; first < n_traj; first += threads) {
    const std::size_t count = std::min<std::size_t>(threads, n_traj - first);
    batch.assign(count, {});
    if (count == 1) {
      batch[0] = run_trajectory(spec, signal, cfg, trajectory_seed(base_seed, first));
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(count);
      for (std::size_t j = 0; j < count; ++j)
        pool.emplace_back([&, j] {
          try {
            batch[j] = run_trajectory(spec, signal, cfg, trajectory_seed(base_seed, first + j));
          } catch (...) {
            errors[j] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (std::size_t j = 0; j < count; ++j) reduce(first + j, batch[j]);
  }

  const double inv = 1.0 / static_cast<double>(n_traj);
  for (auto* v : {&sum.mean_rho00, &sum.mean_rho11, &sum.mean_rho22, &sum.mean_final_populations})
    for (double& x : *v) x *= inv;
  return sum;
}

}  // namespace gravphon
