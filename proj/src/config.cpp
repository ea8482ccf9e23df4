#include "raresim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "raresim/constants.hpp"
#include "raresim/errors.hpp"

namespace raresim {

using namespace constants;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct RawValue {
  std::string text;  // trimmed "number [unit]" or free-form
  bool used = false;
};

using Section = std::map<std::string, RawValue>;
using Document = std::map<std::string, Section>;

Document tokenize(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      doc[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": key outside any [section]");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    auto [it, inserted] = doc[section].emplace(key, RawValue{value, false});
    if (!inserted)
      throw ConfigError(section + "." + key + ": duplicate entry");
  }
  return doc;
}

double parse_number(const std::string& tok, const std::string& context) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw ConfigError(context + ": cannot parse number '" + tok + "'");
  return v;
}

struct UnitEntry {
  const char* name;
  double factor;
};

struct QuantityKind {
  const char* canonical;  // unit emitted by the normalized dump
  std::vector<UnitEntry> units;
};

const std::map<std::string, QuantityKind>& quantity_table() {
  static const std::map<std::string, QuantityKind> table = {
      {"length",
       {"m",
        {{"m", 1.0},
         {"cm", 1e-2},
         {"mm", 1e-3},
         {"um", 1e-6},
         {"\xc2\xb5m", 1e-6},
         {"nm", 1e-9},
         {"km", 1e3}}}},
      {"time",
       {"s", {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6},
              {"\xc2\xb5s", 1e-6}, {"ns", 1e-9}}}},
      // frequencies are stored as angular rad/s; Hz-family inputs are
      // multiplied by 2 pi
      {"angular_frequency",
       {"rad/s",
        {{"rad/s", 1.0},
         {"Hz", two_pi},
         {"kHz", two_pi * 1e3},
         {"MHz", two_pi * 1e6},
         {"GHz", two_pi * 1e9},
         {"THz", two_pi * 1e12}}}},
      {"field_strength",
       {"V/m",
        {{"V/m", 1.0},
         {"mV/m", 1e-3},
         {"uV/m", 1e-6},
         {"\xc2\xb5V/m", 1e-6},
         {"nV/m", 1e-9}}}},
      {"power",
       {"W", {{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6},
              {"\xc2\xb5W", 1e-6}, {"nW", 1e-9}}}},
      {"temperature", {"K", {{"K", 1.0}}}},
      {"susceptibility", {"m^-1", {{"m^-1", 1.0}, {"cm^-1", 1e2}}}},
      // slope of chi in the RF Rabi frequency; the per-Hz tag means per
      // ordinary frequency and is converted to per-(rad/s)
      {"chi_slope",
       {"m^-1/(rad/s)",
        {{"m^-1/(rad/s)", 1.0},
         {"m^-1/Hz", 1.0 / two_pi},
         {"cm^-1/(rad/s)", 1e2},
         {"cm^-1/Hz", 1e2 / two_pi}}}},
      {"dipole", {"C*m", {{"C*m", 1.0}, {"e*a0", e_times_a0}}}},
      {"mass", {"kg", {{"kg", 1.0}, {"u", atomic_mass_unit}}}},
      {"density", {"m^-3", {{"m^-3", 1.0}, {"cm^-3", 1e6}}}},
  };
  return table;
}

std::pair<std::string, std::string> split_number_unit(
    const std::string& text) {
  auto space = text.find_first_of(" \t");
  if (space == std::string::npos) return {text, ""};
  std::string num = trim(text.substr(0, space));
  std::string unit = trim(text.substr(space));
  if (unit.find_first_of(" \t") != std::string::npos)
    return {num, std::string("\x01")};  // multiple tokens: invalid marker
  return {num, unit};
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& quantity,
                      const std::string& context) {
  auto [num_tok, unit] = split_number_unit(text);
  if (unit == "\x01")
    throw ConfigError(context + ": expected 'number unit', got '" + text +
                      "'");
  double v = parse_number(num_tok, context);

  if (quantity == "dimensionless") {
    if (!unit.empty())
      throw ConfigError(context + ": unexpected unit '" + unit +
                        "' on dimensionless field");
    return v;
  }
  if (quantity == "angle_as_sine") {
    // theta = sin(angle); bare numbers are already theta
    if (unit.empty()) return v;
    if (unit == "deg") return std::sin(v * pi / 180.0);
    if (unit == "rad") return std::sin(v);
    throw ConfigError(context + ": unknown angle unit '" + unit +
                      "' (use deg, rad, or a bare sine value)");
  }

  auto it = quantity_table().find(quantity);
  if (it == quantity_table().end())
    throw ConfigError(context + ": unknown quantity kind '" + quantity + "'");
  if (unit.empty())
    throw ConfigError(context + ": missing unit (expected e.g. '" +
                      it->second.canonical + "')");
  for (const auto& u : it->second.units)
    if (unit == u.name) return v * u.factor;
  throw ConfigError(context + ": unit '" + unit + "' not valid here");
}

namespace {

class SectionReader {
 public:
  SectionReader(Document& doc, std::string name)
      : name_(std::move(name)), section_(nullptr) {
    auto it = doc.find(name_);
    if (it != doc.end()) section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }
  bool has(const std::string& key) const {
    return section_ && section_->count(key) > 0;
  }

  double require(const std::string& key, const std::string& quantity) {
    auto* raw = fetch(key);
    if (!raw)
      throw ConfigError(name_ + "." + key + ": missing required field");
    return parse_quantity(raw->text, quantity, name_ + "." + key);
  }

  std::optional<double> optional(const std::string& key,
                                 const std::string& quantity) {
    auto* raw = fetch(key);
    if (!raw) return std::nullopt;
    return parse_quantity(raw->text, quantity, name_ + "." + key);
  }

  std::string require_string(const std::string& key) {
    auto* raw = fetch(key);
    if (!raw)
      throw ConfigError(name_ + "." + key + ": missing required field");
    return raw->text;
  }

  void check_all_used() const {
    if (!section_) return;
    for (const auto& [key, raw] : *section_)
      if (!raw.used)
        throw ConfigError(name_ + "." + key + ": unknown field");
  }

 private:
  RawValue* fetch(const std::string& key) {
    if (!section_) return nullptr;
    auto it = section_->find(key);
    if (it == section_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::string name_;
  Section* section_;
};

}  // namespace

double RunConfig::lo_rabi() const {
  return atom.mu34 * scene.lo.strength / hbar;
}

SusceptibilityPoint RunConfig::resolve_chi_point() const {
  if (override_mode)
    return SusceptibilityPoint{chi_override, chi_slope_override, lo_rabi()};
  return susceptibility_point(atom, env, lo_rabi());
}

CellGeometry RunConfig::resolve_cell() const {
  CellGeometry out = cell;
  SusceptibilityPoint pt = resolve_chi_point();
  if (std::holds_alternative<ContinuousCell>(out))
    std::get<ContinuousCell>(out).chi_point = pt;
  else
    std::get<SegmentalCell>(out).chi_point = pt;
  return out;
}

MeasurementWindow RunConfig::window() const {
  return MeasurementWindow::make(window_duration, scene.beat());
}

double RunConfig::radiance() const {
  return bbr_radiance(scene.lo.frequency(), env.temperature);
}

ChiModel RunConfig::chi_model() const {
  if (override_mode) return ChiModel::linear(resolve_chi_point());
  return ChiModel::tabulated(atom, env, lo_rabi());
}

RunConfig parse_config(const std::string& text) {
  Document doc = tokenize(text);
  RunConfig cfg;

  SectionReader atom(doc, "atom");
  cfg.atom.probe_wavelength = atom.require("probe_wavelength", "length");
  cfg.atom.mu34 = atom.require("mu34", "dipole");

  const bool has_override = atom.has("chi") || atom.has("chi_slope");
  const bool has_first_principles = atom.has("gamma2") || atom.has("mu12") ||
                                    atom.has("probe_rabi");
  if (has_override && has_first_principles)
    throw ConfigError(
        "atom: provide either the chi/chi_slope override pair or the full "
        "atomic parameter set, not both");
  if (!has_override && !has_first_principles)
    throw ConfigError(
        "atom: need chi/chi_slope overrides or first-principles parameters");

  cfg.override_mode = has_override;
  if (has_override) {
    cfg.chi_override = atom.require("chi", "susceptibility");
    cfg.chi_slope_override = atom.require("chi_slope", "chi_slope");
  } else {
    cfg.atom.gamma2 = atom.require("gamma2", "angular_frequency");
    cfg.atom.gamma3 = atom.require("gamma3", "angular_frequency");
    cfg.atom.gamma4 = atom.require("gamma4", "angular_frequency");
    cfg.atom.mu12 = atom.require("mu12", "dipole");
    cfg.atom.probe_rabi = atom.require("probe_rabi", "angular_frequency");
    cfg.atom.coupling_rabi =
        atom.require("coupling_rabi", "angular_frequency");
    cfg.atom.coupling_wavelength =
        atom.require("coupling_wavelength", "length");
    cfg.atom.delta_p =
        atom.optional("detuning_probe", "angular_frequency").value_or(0.0);
    cfg.atom.delta_c =
        atom.optional("detuning_coupling", "angular_frequency").value_or(0.0);
    cfg.atom.delta_l =
        atom.optional("detuning_lo", "angular_frequency").value_or(0.0);
    cfg.atom.atom_mass = atom.require("mass", "mass");
    cfg.atom.atomic_density = atom.require("density", "density");
    cfg.atom.validate();
  }
  atom.check_all_used();

  SectionReader env(doc, "environment");
  cfg.env.temperature = env.require("temperature", "temperature");
  cfg.env.doppler_nodes = static_cast<int>(
      env.optional("doppler_nodes", "dimensionless").value_or(41));
  cfg.env.doppler_truncation =
      env.optional("doppler_truncation", "dimensionless").value_or(5.0);
  cfg.env.validate();
  env.check_all_used();

  SectionReader scene(doc, "scene");
  cfg.scene.lo.strength = scene.require("lo_strength", "field_strength");
  cfg.scene.lo.angular_frequency =
      scene.require("lo_frequency", "angular_frequency");
  cfg.scene.lo.direction = scene.require("lo_direction", "angle_as_sine");
  cfg.scene.lo.phase =
      scene.optional("lo_phase", "dimensionless").value_or(0.0);
  cfg.scene.signal.strength =
      scene.require("signal_strength", "field_strength");
  cfg.scene.signal.direction =
      scene.require("signal_direction", "angle_as_sine");
  cfg.scene.signal.phase =
      scene.optional("signal_phase", "dimensionless").value_or(0.0);
  double beat = scene.require("beat", "angular_frequency");
  cfg.scene.signal.angular_frequency =
      cfg.scene.lo.angular_frequency + beat;
  cfg.scene.validate();
  scene.check_all_used();

  SectionReader cell(doc, "cell");
  std::string type = cell.require_string("type");
  if (type == "continuous") {
    ContinuousCell c;
    c.length = cell.require("L", "length");
    c.validate();
    cfg.cell = c;
  } else if (type == "segmental") {
    SegmentalCell s;
    s.total_length = cell.require("L", "length");
    s.segments =
        static_cast<int>(std::lround(cell.require("M", "dimensionless")));
    s.gap = cell.require("gap", "length");
    s.validate();
    cfg.cell = s;
  } else {
    throw ConfigError("cell.type: expected 'continuous' or 'segmental'");
  }
  cell.check_all_used();

  SectionReader receiver(doc, "receiver");
  cfg.chain.input_power = receiver.require("input_power", "power");
  cfg.chain.quantum_efficiency =
      receiver.require("quantum_efficiency", "dimensionless");
  cfg.chain.probe_angular_frequency = cfg.atom.probe_angular_frequency();
  cfg.chain.validate();
  receiver.check_all_used();

  SectionReader window(doc, "window");
  if (window.has("duration")) {
    cfg.window_duration = window.require("duration", "time");
  } else {
    double n = window.require("periods", "dimensionless");
    cfg.window_duration = n * two_pi / std::abs(beat);
  }
  window.check_all_used();

  // experiment section is kept verbatim for the subcommands
  if (auto it = doc.find("experiment"); it != doc.end())
    for (auto& [key, raw] : it->second) {
      cfg.experiment[key] = raw.text;
      raw.used = true;
    }

  for (const auto& [name, section] : doc) {
    static const char* known[] = {"atom",     "environment", "scene", "cell",
                                  "receiver", "window",      "experiment"};
    bool ok = false;
    for (const char* k : known) ok = ok || name == k;
    if (!ok) throw ConfigError("[" + name + "]: unknown section");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[atom]\n";
  out << "probe_wavelength = " << fmt(cfg.atom.probe_wavelength) << " m\n";
  out << "mu34 = " << fmt(cfg.atom.mu34) << " C*m\n";
  if (cfg.override_mode) {
    out << "chi = " << fmt(cfg.chi_override) << " m^-1\n";
    out << "chi_slope = " << fmt(cfg.chi_slope_override)
        << " m^-1/(rad/s)\n";
  } else {
    out << "gamma2 = " << fmt(cfg.atom.gamma2) << " rad/s\n";
    out << "gamma3 = " << fmt(cfg.atom.gamma3) << " rad/s\n";
    out << "gamma4 = " << fmt(cfg.atom.gamma4) << " rad/s\n";
    out << "mu12 = " << fmt(cfg.atom.mu12) << " C*m\n";
    out << "probe_rabi = " << fmt(cfg.atom.probe_rabi) << " rad/s\n";
    out << "coupling_rabi = " << fmt(cfg.atom.coupling_rabi) << " rad/s\n";
    out << "coupling_wavelength = " << fmt(cfg.atom.coupling_wavelength)
        << " m\n";
    out << "detuning_probe = " << fmt(cfg.atom.delta_p) << " rad/s\n";
    out << "detuning_coupling = " << fmt(cfg.atom.delta_c) << " rad/s\n";
    out << "detuning_lo = " << fmt(cfg.atom.delta_l) << " rad/s\n";
    out << "mass = " << fmt(cfg.atom.atom_mass) << " kg\n";
    out << "density = " << fmt(cfg.atom.atomic_density) << " m^-3\n";
  }
  out << "\n[environment]\n";
  out << "temperature = " << fmt(cfg.env.temperature) << " K\n";
  out << "doppler_nodes = " << cfg.env.doppler_nodes << "\n";
  out << "doppler_truncation = " << fmt(cfg.env.doppler_truncation) << "\n";

  out << "\n[scene]\n";
  out << "lo_strength = " << fmt(cfg.scene.lo.strength) << " V/m\n";
  out << "lo_frequency = " << fmt(cfg.scene.lo.angular_frequency)
      << " rad/s\n";
  out << "lo_direction = " << fmt(cfg.scene.lo.direction) << "\n";
  out << "lo_phase = " << fmt(cfg.scene.lo.phase) << "\n";
  out << "signal_strength = " << fmt(cfg.scene.signal.strength) << " V/m\n";
  out << "signal_direction = " << fmt(cfg.scene.signal.direction) << "\n";
  out << "signal_phase = " << fmt(cfg.scene.signal.phase) << "\n";
  out << "beat = " << fmt(cfg.scene.beat()) << " rad/s\n";

  out << "\n[cell]\n";
  if (std::holds_alternative<ContinuousCell>(cfg.cell)) {
    out << "type = continuous\n";
    out << "L = " << fmt(std::get<ContinuousCell>(cfg.cell).length) << " m\n";
  } else {
    const auto& s = std::get<SegmentalCell>(cfg.cell);
    out << "type = segmental\n";
    out << "L = " << fmt(s.total_length) << " m\n";
    out << "M = " << s.segments << "\n";
    out << "gap = " << fmt(s.gap) << " m\n";
  }

  out << "\n[receiver]\n";
  out << "input_power = " << fmt(cfg.chain.input_power) << " W\n";
  out << "quantum_efficiency = " << fmt(cfg.chain.quantum_efficiency)
      << "\n";

  out << "\n[window]\n";
  out << "duration = " << fmt(cfg.window_duration) << " s\n";

  if (!cfg.experiment.empty()) {
    out << "\n[experiment]\n";
    for (const auto& [key, value] : cfg.experiment)
      out << key << " = " << value << "\n";
  }

  // derived quantities, echoed for inspection only
  out << "\n# derived: I_in = " << fmt(cfg.chain.input_current()) << " A\n";
  out << "# derived: lambda_l = " << fmt(cfg.scene.lo.wavelength()) << " m\n";
  out << "# derived: Omega_l = " << fmt(cfg.lo_rabi()) << " rad/s\n";
  if (std::holds_alternative<SegmentalCell>(cfg.cell)) {
    const auto& s = std::get<SegmentalCell>(cfg.cell);
    out << "# derived: d_s = " << fmt(s.segment_length())
        << " m, d_e = " << fmt(s.pitch())
        << " m, L_e = " << fmt(s.effective_length()) << " m\n";
  }
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::string dump = dump_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

double experiment_number(const RunConfig& cfg, const std::string& key,
                         double fallback) {
  auto it = cfg.experiment.find(key);
  if (it == cfg.experiment.end()) return fallback;
  return parse_quantity(it->second, "dimensionless", "experiment." + key);
}

double experiment_quantity(const RunConfig& cfg, const std::string& key,
                           const std::string& quantity, double fallback) {
  auto it = cfg.experiment.find(key);
  if (it == cfg.experiment.end()) return fallback;
  return parse_quantity(it->second, quantity, "experiment." + key);
}

std::string experiment_string(const RunConfig& cfg, const std::string& key,
                              const std::string& fallback) {
  auto it = cfg.experiment.find(key);
  if (it == cfg.experiment.end()) return fallback;
  return it->second;
}

std::vector<double> experiment_list(const RunConfig& cfg,
                                    const std::string& key,
                                    const std::string& quantity) {
  std::vector<double> out;
  auto it = cfg.experiment.find(key);
  if (it == cfg.experiment.end()) return out;
  std::string rest = it->second;
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    auto comma = rest.find(',', pos);
    std::string item =
        trim(comma == std::string::npos ? rest.substr(pos)
                                        : rest.substr(pos, comma - pos));
    if (!item.empty())
      out.push_back(parse_quantity(item, quantity, "experiment." + key));
    pos = comma == std::string::npos ? std::string::npos : comma + 1;
  }
  return out;
}

}  // namespace raresim
