#pragma once

// Run configuration: an INI-style text file with [detector], [source],
// [measurement], [output] and optional [sensitivity] sections. Every key is
// typed; unknown keys, missing keys and malformed values are errors that name
// section.key. A [meta] section (as written by write_metadata) is ignored so
// metadata files can be fed back in as configs.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gravphon/constants.hpp"
#include "gravphon/detector.hpp"
#include "gravphon/dynamics.hpp"
#include "gravphon/errors.hpp"
#include "gravphon/measurement.hpp"
#include "gravphon/waveform.hpp"

namespace gravphon {

struct IniEntry {
  std::string value;
  std::size_t line = 0;
};

using IniSection = std::map<std::string, IniEntry>;
using IniDocument = std::map<std::string, IniSection>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Splits the text into sections of key = value pairs. '#' and ';' start
/// comments (whole-line or trailing).
inline IniDocument parse_ini(std::istream& in) {
  IniDocument doc;
  std::string section;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find_first_of("#;");
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", lineno);
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError("empty section name", lineno);
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    if (section.empty()) throw ParseError("key outside of any section", lineno);
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("missing key before '='", lineno);
    auto& sec = doc[section];
    if (sec.count(key)) throw ParseError("duplicate key " + section + "." + key, lineno);
    sec[key] = {detail::trim(line.substr(eq + 1)), lineno};
  }
  return doc;
}

/// Typed view of one section; records which keys were consumed so leftovers
/// can be reported as unknown.
class SectionReader {
 public:
  SectionReader(std::string name, const IniSection* sec) : name_(std::move(name)), sec_(sec) {}

  bool has(const std::string& key) const { return sec_ && sec_->count(key); }

  std::optional<std::string> text(const std::string& key) {
    known_.insert(key);
    if (!has(key)) return std::nullopt;
    return sec_->at(key).value;
  }

  std::optional<double> number(const std::string& key, const std::string& unit) {
    auto t = text(key);
    if (!t) return std::nullopt;
    const char* b = t->c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (t->empty() || e != b + t->size() || !std::isfinite(v))
      throw ConfigError(where(key) + ": expected a number" + (unit.empty() ? "" : " in " + unit) +
                        ", got '" + *t + "'");
    return v;
  }

  std::optional<long long> integer(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    const char* b = t->c_str();
    char* e = nullptr;
    const long long v = std::strtoll(b, &e, 10);
    if (t->empty() || e != b + t->size())
      throw ConfigError(where(key) + ": expected an integer, got '" + *t + "'");
    return v;
  }

  std::optional<std::uint64_t> unsigned64(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    const char* b = t->c_str();
    char* e = nullptr;
    const unsigned long long v = std::strtoull(b, &e, 10);
    if (t->empty() || (*t)[0] == '-' || e != b + t->size())
      throw ConfigError(where(key) + ": expected an unsigned 64-bit integer, got '" + *t + "'");
    return v;
  }

  std::optional<bool> boolean(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    if (*t == "true" || *t == "on" || *t == "yes" || *t == "1") return true;
    if (*t == "false" || *t == "off" || *t == "no" || *t == "0") return false;
    throw ConfigError(where(key) + ": expected on/off, got '" + *t + "'");
  }

  template <class T>
  T required(std::optional<T> v, const std::string& key) const {
    if (!v) throw ConfigError("missing required key " + where(key));
    return *v;
  }

  std::string where(const std::string& key) const { return name_ + "." + key; }

  void reject_unknown() const {
    if (!sec_) return;
    for (const auto& [k, e] : *sec_)
      if (!known_.count(k))
        throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + k +
                          "' in section [" + name_ + "]");
  }

 private:
  std::string name_;
  const IniSection* sec_;
  std::set<std::string> known_;
};

/// Material table: comma-separated "name,density,sound_speed" rows; '#'
/// comments and an optional header row are allowed.
inline std::vector<Material> parse_material_table(std::istream& in) {
  std::vector<Material> out;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(detail::trim(c));
    if (cols.size() != 3) throw ParseError("expected name,density,sound_speed", lineno);
    if (out.empty() && cols[1] == "density") continue;
    Material m{cols[0], 0.0, 0.0};
    char* e = nullptr;
    m.density = std::strtod(cols[1].c_str(), &e);
    if (cols[1].empty() || *e) throw ParseError("density is not a number", lineno);
    m.sound_speed = std::strtod(cols[2].c_str(), &e);
    if (cols[2].empty() || *e) throw ParseError("sound_speed is not a number", lineno);
    try {
      m.validate();
    } catch (const ConfigError& err) {
      throw ParseError(err.what(), lineno);
    }
    out.push_back(std::move(m));
  }
  if (out.empty()) throw FormatError("material table is empty");
  return out;
}

inline std::vector<Material> load_material_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open material table '" + path + "'");
  return parse_material_table(in);
}

enum class SourceType { none, monochromatic, chirp, file };

inline const char* to_string(SourceType s) {
  switch (s) {
    case SourceType::none: return "none";
    case SourceType::monochromatic: return "monochromatic";
    case SourceType::chirp: return "chirp";
    case SourceType::file: return "file";
  }
  return "?";
}

struct SensitivityGrid {
  double f_min = 10.0;    // Hz
  double f_max = 2000.0;  // Hz
  int points = 100;       // log-spaced
  std::vector<double> frequencies() const {
    std::vector<double> f(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
      f[static_cast<std::size_t>(i)] =
          points == 1 ? f_min : f_min * std::pow(f_max / f_min, double(i) / (points - 1));
    return f;
  }
};

struct RunConfig {
  DetectorSpec detector;
  std::string materials_file;      // empty: built-in table
  bool mass_optimal = false;
  ChiMethod optimal_method = ChiMethod::quadrature;
  double optimal_chi = 0.0;        // chi used when resolving mass = optimal

  SourceType source_type = SourceType::none;
  std::optional<StrainSignal> source;
  std::string strain_file;
  double source_h0 = 0.0;
  double source_frequency_hz = 0.0;
  double chirp_mass_solar = 0.0;
  double chirp_center = 0.0;
  double chirp_duration = 0.0;
  std::optional<double> chirp_nu0_hz;
  double strain_offset = 0.0;

  MeasurementConfig measurement;
  std::size_t n_traj = 1;
  unsigned threads = 0;

  std::string output_dir = "out";
  SensitivityGrid sensitivity;

  double omega() const { return mode_frequency(detector); }
};

inline ChiMethod parse_chi_method(const std::string& s, const std::string& where) {
  if (s == "quadrature") return ChiMethod::quadrature;
  if (s == "analytic" || s == "chirp_analytic") return ChiMethod::chirp_analytic;
  if (s == "stationary_phase") return ChiMethod::stationary_phase;
  throw ConfigError(where + ": expected quadrature, analytic or stationary_phase, got '" + s + "'");
}

/// chi of the configured source at the detector frequency, by `method`.
inline double source_chi(const RunConfig& cfg, ChiMethod method) {
  if (!cfg.source) throw ConfigError("this operation requires a [source] section");
  const double w = cfg.omega();
  const StrainSignal& sig = *cfg.source;
  if (const auto* c = std::get_if<ChirpSource>(&sig)) {
    if (method == ChiMethod::chirp_analytic) return chi_chirp_analytic(c->amplitude, c->k(), w).value;
    if (method == ChiMethod::stationary_phase) return chi_stationary_phase(*c, w).value;
    return chi_quadrature(sig, w, default_chirp_window(*c, w)).value;
  }
  if (method != ChiMethod::quadrature)
    throw ConfigError("source.optimal_method: only quadrature applies to a non-chirp source");
  const Interval sup = signal_support(sig);
  if (!sup.bounded()) throw ConfigError("source needs a bounded duration to define chi");
  return chi_quadrature(sig, w, sup).value;
}

/// Parses and validates a configuration document.
inline RunConfig parse_config(std::istream& in, const std::string& base_dir = ".") {
  const IniDocument doc = parse_ini(in);
  for (const auto& [name, sec] : doc) {
    static const std::set<std::string> known{"detector", "source", "measurement", "output",
                                             "sensitivity", "meta"};
    if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
  }
  auto section = [&](const std::string& n) -> const IniSection* {
    auto it = doc.find(n);
    return it == doc.end() ? nullptr : &it->second;
  };
  auto resolve = [&](const std::string& p) {
    return (p.empty() || p.front() == '/' || base_dir.empty()) ? p : base_dir + "/" + p;
  };

  RunConfig cfg;
  if (!section("detector")) throw ConfigError("missing required section [detector]");

  // [detector]
  SectionReader det("detector", section("detector"));
  if (auto f = det.text("materials_file")) cfg.materials_file = resolve(*f);
  const std::vector<Material> table =
      cfg.materials_file.empty() ? materials::builtin() : load_material_table(cfg.materials_file);
  Material mat;
  if (auto name = det.text("material")) {
    auto found = find_material(*name, table);
    if (!found) throw ConfigError(det.where("material") + ": unknown material '" + *name + "'");
    mat = *found;
  } else {
    mat.name = "custom";
  }
  if (auto v = det.number("density", "kg/m^3")) mat.density = *v;
  if (auto v = det.number("sound_speed", "m/s")) mat.sound_speed = *v;
  if (mat.density <= 0.0 || mat.sound_speed <= 0.0)
    throw ConfigError("detector: give material or both density and sound_speed");
  cfg.detector.material = mat;
  cfg.detector.mode = static_cast<int>(det.integer("mode").value_or(1));
  if (cfg.detector.mode < 1 || cfg.detector.mode % 2 == 0)
    throw ConfigError(det.where("mode") + ": expected an odd positive integer");
  const auto length = det.number("length", "m");
  const auto freq = det.number("frequency", "Hz");
  if (length && freq) throw ConfigError("detector: give either length or frequency, not both");
  if (freq) {
    if (!(*freq > 0.0)) throw ConfigError(det.where("frequency") + ": must be > 0");
    cfg.detector.length = cfg.detector.mode * mat.sound_speed / (2.0 * *freq);
  } else {
    cfg.detector.length = det.required(length, "length");
  }
  cfg.detector.radius = det.number("radius", "m");
  cfg.detector.quality = det.number("quality", "").value_or(cfg.detector.quality);
  cfg.detector.temperature = det.number("temperature", "K").value_or(cfg.detector.temperature);
  std::optional<std::string> mass_text = det.text("mass");
  if (auto m = det.text("optimal_method"))
    cfg.optimal_method = parse_chi_method(*m, det.where("optimal_method"));
  det.reject_unknown();

  // [measurement]
  SectionReader mea("measurement", section("measurement"));
  MeasurementConfig& mc = cfg.measurement;
  mc.dt = mea.number("dt", "s").value_or(mc.dt);
  mc.t_m = mea.number("t_m", "s").value_or(mc.t_m);
  mc.t_meas = mea.number("t_meas", "s").value_or(mc.t_meas);
  mc.duration = mea.number("duration", "s").value_or(2.0 * mc.t_meas);
  mc.dim = static_cast<int>(mea.integer("dim").value_or(mc.dim));
  mc.kappa = mea.number("kappa", "").value_or(mc.kappa);
  if (auto s = mea.text("kappa_scaling")) {
    if (*s == "per_step") mc.kappa_scaling = KappaScaling::per_step_variance;
    else if (*s == "diffusive") mc.kappa_scaling = KappaScaling::diffusive;
    else throw ConfigError(mea.where("kappa_scaling") + ": expected per_step or diffusive, got '" + *s + "'");
  }
  const bool thermal = mea.boolean("thermal").value_or(false);
  mc.seed = mea.unsigned64("seed").value_or(mc.seed);
  cfg.n_traj = static_cast<std::size_t>(mea.integer("n_traj").value_or(1));
  cfg.threads = static_cast<unsigned>(mea.integer("threads").value_or(0));
  mc.measure = mea.boolean("measure").value_or(true);
  mc.jump_threshold = mea.number("jump_threshold", "").value_or(mc.jump_threshold);
  mc.jump_hold = mea.number("jump_hold", "s");
  mea.reject_unknown();

  // [output]
  SectionReader out("output", section("output"));
  cfg.output_dir = out.text("directory").value_or(cfg.output_dir);
  mc.record_stride = static_cast<int>(out.integer("stride").value_or(mc.record_stride));
  out.reject_unknown();

  // [sensitivity]
  SectionReader sen("sensitivity", section("sensitivity"));
  cfg.sensitivity.f_min = sen.number("f_min", "Hz").value_or(cfg.sensitivity.f_min);
  cfg.sensitivity.f_max = sen.number("f_max", "Hz").value_or(cfg.sensitivity.f_max);
  cfg.sensitivity.points = static_cast<int>(sen.integer("points").value_or(cfg.sensitivity.points));
  if (!(cfg.sensitivity.f_min > 0.0) || !(cfg.sensitivity.f_max > cfg.sensitivity.f_min) ||
      cfg.sensitivity.points < 1)
    throw ConfigError("sensitivity: need 0 < f_min < f_max and points >= 1");
  sen.reject_unknown();

  // [source]; the resonant chirp needs the detector frequency, known from L.
  const double omega = mode_frequency(cfg.detector);
  if (const IniSection* s = section("source")) {
    SectionReader src("source", s);
    const std::string type = src.required(src.text("type"), "type");
    if (type == "monochromatic") {
      cfg.source_type = SourceType::monochromatic;
      MonochromaticWave w;
      w.amplitude = cfg.source_h0 = src.required(src.number("h0", ""), "h0");
      cfg.source_frequency_hz = src.number("frequency", "Hz").value_or(omega / (2.0 * kPi));
      w.frequency = 2.0 * kPi * cfg.source_frequency_hz;
      w.phase = src.number("phase", "rad").value_or(0.0);
      const double start = src.number("start", "s").value_or(0.0);
      const double dur = src.required(src.number("duration", "s"), "duration");
      w.support = {start, start + dur};
      w.validate();
      cfg.source = w;
    } else if (type == "chirp") {
      cfg.source_type = SourceType::chirp;
      cfg.source_h0 = src.required(src.number("h0", ""), "h0");
      cfg.chirp_mass_solar = src.required(src.number("chirp_mass", "solar masses"), "chirp_mass");
      cfg.chirp_center = src.number("center", "s").value_or(mc.t_meas + 10.0);
      cfg.chirp_duration = src.number("duration", "s").value_or(4.0);
      AmplitudeModel am = AmplitudeModel::constant;
      if (auto a = src.text("amplitude_model")) {
        if (*a == "nu_two_thirds") am = AmplitudeModel::nu_two_thirds;
        else if (*a != "constant")
          throw ConfigError(src.where("amplitude_model") + ": expected constant or nu_two_thirds");
      }
      HddotModel hm = HddotModel::locally_monochromatic;
      if (auto a = src.text("hddot_model")) {
        if (*a == "exact") hm = HddotModel::exact;
        else if (*a != "locally_monochromatic")
          throw ConfigError(src.where("hddot_model") + ": expected locally_monochromatic or exact");
      }
      cfg.chirp_nu0_hz = src.number("nu0", "Hz");
      const double mc_kg = cfg.chirp_mass_solar * kConstants.solar_mass;
      ChirpSource c;
      if (cfg.chirp_nu0_hz) {
        c.chirp_mass = mc_kg;
        c.amplitude = cfg.source_h0;
        c.nu0 = 2.0 * kPi * *cfg.chirp_nu0_hz;
        c.start_time = src.number("start", "s").value_or(0.0);
        c.amplitude_model = am;
        if (auto r = src.number("reference_frequency", "Hz")) c.reference_frequency = 2.0 * kPi * *r;
        c.support = {c.start_time, c.start_time + cfg.chirp_duration};
        c.validate();
        if (!(c.support.end < c.coalescence()))
          throw ConfigError("source: chirp duration extends past coalescence");
      } else {
        c = resonant_chirp(mc_kg, cfg.source_h0, omega, cfg.chirp_center, cfg.chirp_duration, am);
      }
      c.hddot_model = hm;
      cfg.source = c;
    } else if (type == "file") {
      cfg.source_type = SourceType::file;
      cfg.strain_file = resolve(src.required(src.text("path"), "path"));
      SampledStrain smp = load_strain_series(cfg.strain_file);
      cfg.strain_offset = src.number("offset", "s").value_or(0.0);
      smp.t0 += cfg.strain_offset;
      cfg.source = std::move(smp);
    } else if (type == "none") {
      cfg.source_type = SourceType::none;
    } else {
      throw ConfigError(src.where("type") + ": expected monochromatic, chirp, file or none, got '" +
                        type + "'");
    }
    src.reject_unknown();
  }

  // Mass last: "optimal" needs the source.
  if (mass_text && *mass_text == "optimal") {
    if (!cfg.source) throw ConfigError("detector.mass = optimal requires a [source] section");
    cfg.mass_optimal = true;
    cfg.optimal_chi = source_chi(cfg, cfg.optimal_method);
    cfg.detector.mass = optimal_mass(mat, cfg.optimal_chi, omega, cfg.detector.mode);
  } else if (mass_text) {
    const char* b = mass_text->c_str();
    char* e = nullptr;
    cfg.detector.mass = std::strtod(b, &e);
    if (mass_text->empty() || e != b + mass_text->size())
      throw ConfigError("detector.mass: expected a number in kg or 'optimal', got '" + *mass_text + "'");
  } else if (cfg.detector.radius) {
    cfg.detector.mass = cfg.detector.geometric_mass();
  } else {
    throw ConfigError("missing required key detector.mass (or detector.radius)");
  }
  cfg.detector.validate();

  if (thermal) mc.thermal_rate = gamma_thermal(cfg.detector);
  mc.validate();
  if (cfg.n_traj < 1) throw ConfigError("measurement.n_traj must be >= 1");
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const auto slash = path.find_last_of('/');
  return parse_config(in, slash == std::string::npos ? "." : path.substr(0, slash));
}

/// Writes the fully resolved configuration (re-readable by parse_config) plus
/// a [meta] block with versions and the seed actually used.
inline void write_metadata(std::ostream& os, const RunConfig& cfg, const std::string& command) {
  using detail::format_double;
  const DetectorSpec& d = cfg.detector;
  const MeasurementConfig& m = cfg.measurement;
  os << "[meta]\n"
     << "command = " << command << '\n'
     << "artifact_version = " << kVersion << '\n'
     << "constants = " << kConstantsVersion << '\n'
     << "seed = " << m.seed << '\n';
  if (cfg.mass_optimal)
    os << "mass_resolution = optimal via " << to_string(cfg.optimal_method)
       << " chi = " << format_double(cfg.optimal_chi) << '\n';
  os << "\n[detector]\n";
  if (!cfg.materials_file.empty()) os << "materials_file = " << cfg.materials_file << '\n';
  os << "density = " << format_double(d.material.density) << '\n'
     << "sound_speed = " << format_double(d.material.sound_speed) << '\n'
     << "length = " << format_double(d.length) << '\n';
  if (d.radius) os << "radius = " << format_double(*d.radius) << '\n';
  os << "mass = " << format_double(d.mass) << '\n'
     << "mode = " << d.mode << '\n'
     << "quality = " << format_double(d.quality) << '\n'
     << "temperature = " << format_double(d.temperature) << '\n';

  if (cfg.source_type != SourceType::none) {
    os << "\n[source]\ntype = " << to_string(cfg.source_type) << '\n';
    if (cfg.source_type == SourceType::monochromatic) {
      const auto& w = std::get<MonochromaticWave>(*cfg.source);
      os << "h0 = " << format_double(w.amplitude) << '\n'
         << "frequency = " << format_double(cfg.source_frequency_hz) << '\n'
         << "phase = " << format_double(w.phase) << '\n'
         << "start = " << format_double(w.support.begin) << '\n'
         << "duration = " << format_double(w.support.length()) << '\n';
    } else if (cfg.source_type == SourceType::chirp) {
      const auto& c = std::get<ChirpSource>(*cfg.source);
      os << "h0 = " << format_double(c.amplitude) << '\n'
         << "chirp_mass = " << format_double(cfg.chirp_mass_solar) << '\n'
         << "nu0 = " << format_double(c.nu0 / (2.0 * kPi)) << '\n'
         << "start = " << format_double(c.start_time) << '\n'
         << "duration = " << format_double(c.support.length()) << '\n'
         << "reference_frequency = "
         << format_double(c.reference_frequency.value_or(c.nu0) / (2.0 * kPi)) << '\n'
         << "amplitude_model = "
         << (c.amplitude_model == AmplitudeModel::constant ? "constant" : "nu_two_thirds") << '\n'
         << "hddot_model = "
         << (c.hddot_model == HddotModel::exact ? "exact" : "locally_monochromatic") << '\n';
    } else {
      os << "path = " << cfg.strain_file << '\n';
      os << "offset = " << format_double(cfg.strain_offset) << '\n';
    }
  }

  os << "\n[measurement]\n"
     << "dt = " << format_double(m.dt) << '\n'
     << "t_m = " << format_double(m.t_m) << '\n'
     << "t_meas = " << format_double(m.t_meas) << '\n'
     << "duration = " << format_double(m.duration) << '\n'
     << "dim = " << m.dim << '\n'
     << "kappa = " << format_double(m.kappa) << '\n'
     << "kappa_scaling = "
     << (m.kappa_scaling == KappaScaling::diffusive ? "diffusive" : "per_step") << '\n'
     << "thermal = " << (m.thermal_rate > 0.0 ? "on" : "off") << '\n'
     << "seed = " << m.seed << '\n'
     << "n_traj = " << cfg.n_traj << '\n'
     << "measure = " << (m.measure ? "on" : "off") << '\n'
     << "jump_threshold = " << format_double(m.jump_threshold) << '\n'
     << "jump_hold = " << format_double(m.jump_hold_time()) << '\n'
     << "\n[output]\n"
     << "directory = " << cfg.output_dir << '\n'
     << "stride = " << m.record_stride << '\n'
     << "\n[sensitivity]\n"
     << "f_min = " << format_double(cfg.sensitivity.f_min) << '\n'
     << "f_max = " << format_double(cfg.sensitivity.f_max) << '\n'
     << "points = " << cfg.sensitivity.points << '\n';
}

}  // namespace gravphon
