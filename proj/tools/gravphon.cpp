// gravphon command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gravphon/gravphon.hpp"

namespace fs = std::filesystem;
using namespace gravphon;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Tracks the files a command writes. If the command fails they are deleted
// and an INCOMPLETE marker with the error is left behind instead.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    if (!created_) {
      fs::create_directories(dir_);
      fs::remove(dir_ / "INCOMPLETE");
      created_ = true;
    }
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + p.string() + "'");
    files_.push_back(p);
    return out;
  }

  void abandon(const std::string& why) noexcept {
    std::error_code ec;
    for (const auto& p : files_) fs::remove(p, ec);
    if (!created_) return;
    std::ofstream m(dir_ / "INCOMPLETE");
    m << why << '\n';
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  bool created_ = false;
  std::vector<fs::path> files_;
};

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_traj;
};

RunConfig load(const Common& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.measurement.seed = *o.seed;
  if (o.n_traj) {
    if (*o.n_traj < 1) throw ConfigError("--n-traj must be >= 1");
    cfg.n_traj = *o.n_traj;
  }
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

void write_meta(OutputDir& dir, const RunConfig& cfg, const std::string& command) {
  auto f = dir.open("metadata.ini");
  write_metadata(f, cfg, command);
}

// Integration window used for chi and beta of the configured source.
Interval source_window(const RunConfig& cfg) {
  const StrainSignal& s = *cfg.source;
  if (const auto* c = std::get_if<ChirpSource>(&s)) return default_chirp_window(*c, cfg.omega());
  const Interval sup = signal_support(s);
  if (!sup.bounded()) throw ConfigError("source needs a bounded duration");
  return sup;
}

void print_rows(const std::vector<std::pair<std::string, std::pair<double, std::string>>>& rows,
                std::ostream& csv) {
  csv << "quantity,value,unit\n";
  for (const auto& [name, vu] : rows) {
    std::printf("%-24s %-24s %s\n", name.c_str(), num(vu.first).c_str(), vu.second.c_str());
    csv << name << ',' << num(vu.first) << ',' << vu.second << '\n';
  }
}

int cmd_rates(const Common& o, OutputDir& dir, const RunConfig& cfg) {
  const DetectorSpec& d = cfg.detector;
  const double w = cfg.omega();
  std::vector<std::pair<std::string, std::pair<double, std::string>>> rows{
      {"mode_frequency", {w / (2 * kPi), "Hz"}},
      {"mass", {d.mass, "kg"}},
      {"gamma_spon", {gamma_spontaneous(d), "Hz"}},
  };
  if (d.radius) rows.push_back({"gamma_spon_geometric", {gamma_spontaneous_geometric(d), "Hz"}});
  if (cfg.source_h0 > 0.0) {
    rows.push_back({"h0", {cfg.source_h0, ""}});
    rows.push_back({"gamma_stim", {gamma_stimulated(d, cfg.source_h0), "Hz"}});
    rows.push_back({"graviton_number", {graviton_number(cfg.source_h0, w), ""}});
  }
  rows.push_back({"nbar", {thermal_occupation(d.temperature, w), ""}});
  rows.push_back({"gamma_thermal", {gamma_thermal(d), "Hz"}});
  const Lifetime life = fock_lifetime(d);
  rows.push_back({"fock_lifetime", {life.seconds, "s"}});
  rows.push_back({"thermal_lifetime", {1.0 / gamma_thermal(d), "s"}});
  rows.push_back({"characteristic_strain", {characteristic_strain(d), ""}});
  if (!life.regime_valid)
    std::fprintf(stderr, "warning: k_B T is not >> hbar omega; fock_lifetime outside its regime\n");
  auto f = dir.open("rates.csv");
  print_rows(rows, f);
  write_meta(dir, cfg, "rates");
  (void)o;
  return 0;
}

int cmd_chi(const Common&, OutputDir& dir, const RunConfig& cfg) {
  if (!cfg.source) throw ConfigError("chi requires a [source] section");
  const double w = cfg.omega();
  const double coupling = beta_coupling(cfg.detector);
  const Interval win = source_window(cfg);
  struct Row {
    std::string method;
    ChiResult r;
  };
  std::vector<Row> rows;
  rows.push_back({"quadrature", chi_quadrature(*cfg.source, w, win)});
  if (const auto* c = std::get_if<ChirpSource>(&*cfg.source)) {
    rows.push_back({"stationary_phase", chi_stationary_phase(*c, w)});
    rows.push_back({"chirp_analytic", chi_chirp_analytic(c->amplitude, c->k(), w)});
  } else if (const auto* m = std::get_if<MonochromaticWave>(&*cfg.source)) {
    rows.push_back({"monochromatic_closed_form",
                    chi_monochromatic(m->amplitude, m->frequency, w, m->support.length())});
  }
  auto f = dir.open("chi.csv");
  f << "method,chi,beta_abs,P0,P1,P2,P3,regime_warning\n";
  std::printf("%-26s %-24s %-24s %s\n", "method", "chi", "|beta|", "P1");
  for (const auto& row : rows) {
    const double b = coupling * row.r.value;
    f << row.method << ',' << num(row.r.value) << ',' << num(b);
    for (int n = 0; n <= 3; ++n) f << ',' << num(excitation_probability(b, n));
    f << ',' << (row.r.regime_warning ? 1 : 0) << '\n';
    std::printf("%-26s %-24s %-24s %s%s\n", row.method.c_str(), num(row.r.value).c_str(),
                num(b).c_str(), num(excitation_probability(b, 1)).c_str(),
                row.r.regime_warning ? "  (outside validity regime)" : "");
  }
  write_meta(dir, cfg, "chi");
  return 0;
}

int cmd_optimal_mass(const Common&, OutputDir& dir, const RunConfig& cfg) {
  if (!cfg.source) throw ConfigError("optimal-mass requires a [source] section");
  const double w = cfg.omega();
  const Interval win = source_window(cfg);
  std::vector<ChiMethod> methods{ChiMethod::quadrature};
  if (std::holds_alternative<ChirpSource>(*cfg.source)) {
    methods.push_back(ChiMethod::stationary_phase);
    methods.push_back(ChiMethod::chirp_analytic);
  }
  auto f = dir.open("optimal_mass.csv");
  f << "method,chi,mass_kg,beta_abs\n";
  std::printf("%-20s %-24s %-24s %s\n", "method", "chi", "mass [kg]", "|beta| (quadrature)");
  for (ChiMethod m : methods) {
    const double chi = source_chi(cfg, m);
    const double mass = optimal_mass(cfg.detector.material, chi, w, cfg.detector.mode);
    DetectorSpec s = cfg.detector;
    s.mass = mass;
    const double b = displacement_beta(s, *cfg.source, win).magnitude();
    f << to_string(m) << ',' << num(chi) << ',' << num(mass) << ',' << num(b) << '\n';
    std::printf("%-20s %-24s %-24s %s\n", to_string(m), num(chi).c_str(), num(mass).c_str(),
                num(b).c_str());
  }
  write_meta(dir, cfg, "optimal-mass");
  return 0;
}

void write_trajectory(OutputDir& dir, std::size_t k, const TrajectoryRecord& rec) {
  {
    auto f = dir.open("trajectories_" + std::to_string(k) + ".csv");
    std::string buf = "time,r,rho00,rho11,rho22\n";
    char line[160];
    for (std::size_t i = 0; i < rec.size(); ++i) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.times[i],
                    rec.readout[i], rec.rho00[i], rec.rho11[i], rec.rho22[i]);
      buf += line;
    }
    f << buf;
  }
  auto e = dir.open("events_" + std::to_string(k) + ".csv");
  e << "time,kind\n";
  for (const Event& ev : rec.events) e << num(ev.time) << ',' << to_string(ev.kind) << '\n';
}

int cmd_simulate(const Common&, OutputDir& dir, const RunConfig& cfg) {
  // no source: a silent drive, useful for measurement-only runs
  const StrainSignal signal =
      cfg.source ? *cfg.source : StrainSignal{MonochromaticWave{0.0, cfg.omega(), 0.0, {-2.0, -1.0}}};
  write_meta(dir, cfg, "simulate");
  const EnsembleSummary sum =
      run_ensemble(cfg.detector, signal, cfg.measurement, cfg.n_traj, cfg.measurement.seed,
                   [&](std::size_t k, const TrajectoryRecord& r) { write_trajectory(dir, k, r); },
                   cfg.threads);
  {
    auto f = dir.open("summary.csv");
    f << "time,mean_rho00,mean_rho11,mean_rho22\n";
    for (std::size_t i = 0; i < sum.times.size(); ++i)
      f << num(sum.times[i]) << ',' << num(sum.mean_rho00[i]) << ',' << num(sum.mean_rho11[i]) << ','
        << num(sum.mean_rho22[i]) << '\n';
  }
  auto f = dir.open("ensemble.csv");
  f << "quantity,value\n"
    << "n_traj," << sum.n_traj << '\n'
    << "detections," << sum.detections << '\n'
    << "detection_fraction," << num(sum.detection_fraction()) << '\n'
    << "max_trace_error," << num(sum.max_trace_error) << '\n';
  if (cfg.source) {
    const double b = displacement_beta(cfg.detector, *cfg.source, source_window(cfg)).magnitude();
    f << "beta_abs," << num(b) << '\n' << "P1," << num(excitation_probability(b, 1)) << '\n';
  }
  std::printf("trajectories %zu, detections %zu (fraction %s), max trace error %s\n", sum.n_traj,
              sum.detections, num(sum.detection_fraction()).c_str(), num(sum.max_trace_error).c_str());
  std::printf("outputs in %s\n", dir.path().string().c_str());
  return 0;
}

int cmd_sensitivity(const Common&, OutputDir& dir, const RunConfig& cfg, const std::string& reference) {
  const auto pts = sensitivity_curve(cfg.detector, cfg.sensitivity.frequencies(),
                                     cfg.detector.material.name);
  {
    auto f = dir.open("sensitivity.csv");
    f << "frequency_hz,h_c,label\n";
    for (const auto& p : pts) f << num(p.frequency) << ',' << num(p.h_c) << ',' << p.label << '\n';
  }
  if (!reference.empty()) {
    // user overlay table: label,frequency_hz,h rows, validated and copied
    std::ifstream in(reference);
    if (!in) throw FormatError("cannot open reference table '" + reference + "'");
    auto f = dir.open("reference.csv");
    f << "label,frequency_hz,h\n";
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#' || line.rfind("label", 0) == 0) continue;
      std::stringstream ss(line);
      std::string label, fq, h;
      if (!std::getline(ss, label, ',') || !std::getline(ss, fq, ',') || !std::getline(ss, h))
        throw ParseError("expected label,frequency_hz,h", lineno);
      try {
        f << label << ',' << num(std::stod(fq)) << ',' << num(std::stod(h)) << '\n';
      } catch (const std::logic_error&) {
        throw ParseError("frequency and h must be numbers", lineno);
      }
    }
  }
  std::printf("%zu points from %s to %s Hz; h_c(%s Hz) = %s\n", pts.size(), num(pts.front().frequency).c_str(),
              num(pts.back().frequency).c_str(), num(pts.front().frequency).c_str(),
              num(pts.front().h_c).c_str());
  write_meta(dir, cfg, "sensitivity");
  return 0;
}

int cmd_lattice(const Common& o, OutputDir& dir) {
  LatticeVerifyOptions opt;
  std::optional<RunConfig> cfg;
  if (!o.config.empty()) {
    cfg = load(o);
    opt.mass = cfg->detector.mass;
    opt.length = cfg->detector.length;
    opt.sound_speed = cfg->detector.material.sound_speed;
  }
  const auto checks = lattice_verification(opt);
  auto f = dir.open("lattice.csv");
  f << "check,measured,bound,kind,result\n";
  bool all = true;
  for (const auto& c : checks) {
    const char* res = c.passed() ? "PASS" : "FAIL";
    all = all && c.passed();
    f << c.name << ',' << num(c.measured) << ',' << num(c.bound) << ','
      << (c.lower_bound ? "min" : "max") << ',' << res << '\n';
    std::printf("%s %-24s measured %-24s %s %s\n", res, c.name.c_str(), num(c.measured).c_str(),
                c.lower_bound ? ">=" : "<=", num(c.bound).c_str());
  }
  if (cfg) write_meta(dir, *cfg, "lattice-verify");
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-graviton detection with cooled bar resonators"};
  app.set_version_flag("--version", std::string(kVersion) + " (constants " + kConstantsVersion + ")");
  app.require_subcommand(1);

  Common o;
  std::string reference;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "configuration file")->check(CLI::ExistingFile);
    if (config_required) c->required();
    sub->add_option("--out", o.out, "output directory (overrides [output] directory)");
    sub->add_option("--seed", o.seed, "base seed override");
    sub->add_option("--n-traj", o.n_traj, "number of trajectories override");
  };
  auto* rates = app.add_subcommand("rates", "emission, absorption and thermal rates");
  auto* chi = app.add_subcommand("chi", "chi by every applicable method, |beta| and P_n");
  auto* opt = app.add_subcommand("optimal-mass", "mass giving |beta| = 1");
  auto* sim = app.add_subcommand("simulate", "monitored trajectories under the configured drive");
  auto* sens = app.add_subcommand("sensitivity", "characteristic strain over a frequency grid");
  auto* lat = app.add_subcommand("lattice-verify", "atomistic chain checks against the continuum bar");
  for (auto* s : {rates, chi, opt, sim, sens}) add_common(s, true);
  add_common(lat, false);
  sens->add_option("--reference", reference, "overlay table (label,frequency_hz,h)")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  std::optional<OutputDir> dir;
  try {
    if (lat->parsed()) {
      dir.emplace(o.out.empty() ? fs::path("out") : fs::path(o.out));
      return cmd_lattice(o, *dir);
    }
    const RunConfig cfg = load(o);
    dir.emplace(cfg.output_dir);
    if (rates->parsed()) return cmd_rates(o, *dir, cfg);
    if (chi->parsed()) return cmd_chi(o, *dir, cfg);
    if (opt->parsed()) return cmd_optimal_mass(o, *dir, cfg);
    if (sim->parsed()) return cmd_simulate(o, *dir, cfg);
    if (sens->parsed()) return cmd_sensitivity(o, *dir, cfg, reference);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    if (dir) dir->abandon(e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    if (dir) dir->abandon(e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (dir) dir->abandon(e.what());
    return 1;
  }
  return 1;
}
