#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "eitbec/constants.hpp"

namespace eitbec::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '.')) {
      return false;
    }
  }
  return true;
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  KeyValueConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": bad key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty value for '" +
                        key + "'");
    }
    if (cfg.values_.count(key)) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("bad key '" + key + "'");
  values_[key] = value;
}

void KeyValueConfig::set_default(const std::string& key, const std::string& value) {
  if (!values_.count(key)) set(key, value);
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  return to_double(key, raw(key));
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return get_double(key);
}

std::optional<double> KeyValueConfig::get_optional_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

bool KeyValueConfig::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = raw(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + v + "'");
}

int KeyValueConfig::get_int_or(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9) {
    throw ConfigError("key '" + key + "' expects an integer");
  }
  return i;
}

std::string KeyValueConfig::get_string_or(const std::string& key,
                                          const std::string& fallback) const {
  if (!has(key)) return fallback;
  return raw(key);
}

std::vector<double> KeyValueConfig::get_list(const std::string& key) const {
  const std::string v = raw(key);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("key '" + key + "' has an empty list entry");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("key '" + key + "' holds an empty list");
  return out;
}

std::vector<double> KeyValueConfig::get_list_or(
    const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  return get_list(key);
}

std::vector<std::string> KeyValueConfig::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) out.push_back(key);
  }
  return out;
}

void KeyValueConfig::require_fully_consumed() const {
  const auto leftover = unconsumed();
  if (leftover.empty()) return;
  std::string msg = "unknown or misplaced config keys:";
  for (const auto& k : leftover) msg += " " + k;
  throw ConfigError(msg);
}

void apply_preset(KeyValueConfig& cfg, const std::string& name) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (name == "hau1999") {
    cfg.set_default("gas.species", "Na23");
    cfg.set_default("gas.scattering_length_m", "2.8e-9");
    cfg.set_default("gas.density_per_m3", "8e19");
    cfg.set_default("gas.critical_temp_k", "435e-9");
    cfg.set_default("gas.level_splitting_rad_per_s", format_number(two_pi * 1.8e9));
  } else if (name == "hau2001") {
    cfg.set_default("coupling.omega_rad_per_s", format_number(two_pi * 5.61e6));
    cfg.set_default("coupling.g_root_n0_rad_per_s", format_number(two_pi * 15e6));
    cfg.set_default("coupling.gamma_a_per_s", format_number(two_pi * 10e6));
    cfg.set_default("coupling.gamma_c_per_s", format_number(two_pi * 10e3));
    cfg.set_default("coupling.photon_number", "3e4");
  } else {
    throw ConfigError("unknown preset '" + name + "' (available: hau1999, hau2001)");
  }
}

CondensateParams parse_gas_block(const KeyValueConfig& cfg) {
  double mass = 0.0;
  const std::string species = cfg.get_string_or("gas.species", "");
  if (!species.empty()) {
    if (species == "Na23") {
      mass = constants::mass_na23;
    } else {
      throw ConfigError("unknown gas.species '" + species + "' (available: Na23)");
    }
    if (cfg.has("gas.atom_mass_kg")) {
      throw ConfigError("give gas.species or gas.atom_mass_kg, not both");
    }
  } else {
    mass = cfg.get_double("gas.atom_mass_kg");
  }

  try {
    return CondensateParams(cfg.get_double("gas.scattering_length_m"), mass,
                            cfg.get_double("gas.density_per_m3"),
                            cfg.get_optional_double("gas.critical_temp_k"),
                            cfg.get_double("gas.level_splitting_rad_per_s"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("gas block: ") + e.what());
  }
}

CouplingBlock parse_coupling_block(const KeyValueConfig& cfg) {
  CouplingBlock block;
  block.placement = cfg.get_bool_or("coupling.gamma_a_on_excited_state", true)
                        ? GammaAPlacement::excited_state
                        : GammaAPlacement::photon;
  const double gamma_a = cfg.get_double("coupling.gamma_a_per_s");
  const double gamma_c = cfg.get_double("coupling.gamma_c_per_s");
  const double n = cfg.get_double("coupling.photon_number");
  const double omega = cfg.get_double("coupling.omega_rad_per_s");
  try {
    if (cfg.has("coupling.theta_rad")) {
      if (cfg.has("coupling.g_root_n0_rad_per_s")) {
        throw ConfigError(
            "give coupling.theta_rad or coupling.g_root_n0_rad_per_s, not both");
      }
      block.coupling = CouplingConfig::from_theta(cfg.get_double("coupling.theta_rad"),
                                                  omega, gamma_a, gamma_c, n);
    } else {
      block.coupling = CouplingConfig::from_couplings(
          omega, cfg.get_double("coupling.g_root_n0_rad_per_s"), gamma_a, gamma_c, n);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("coupling block: ") + e.what());
  }
  return block;
}

QuadratureSettings parse_quad_block(const KeyValueConfig& cfg) {
  QuadratureSettings q;
  q.relative_tolerance = cfg.get_double_or("quad.relative_tolerance", q.relative_tolerance);
  q.absolute_tolerance_scale =
      cfg.get_double_or("quad.absolute_tolerance_scale", q.absolute_tolerance_scale);
  q.landau_cutoff_multiplier =
      cfg.get_double_or("quad.landau_cutoff_multiplier", q.landau_cutoff_multiplier);
  q.max_subdivisions = cfg.get_int_or("quad.max_subdivisions", q.max_subdivisions);
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("quad block: ") + e.what());
  }
  return q;
}

RampBlock parse_ramp_block(const KeyValueConfig& cfg) {
  RampBlock block;
  block.ramp.t_on = cfg.get_double_or("ramp.t_on_s", 20e-6);
  block.ramp.t_hold = cfg.get_double_or("ramp.t_hold_s", 1e-3);
  block.ramp.t_off = cfg.get_double_or("ramp.t_off_s", 20e-6);
  const std::string shape = cfg.get_string_or("ramp.shape", "cosine");
  if (shape == "cosine") {
    block.ramp.shape = RampShape::cosine;
  } else if (shape == "linear") {
    block.ramp.shape = RampShape::linear;
  } else {
    throw ConfigError("ramp.shape must be 'linear' or 'cosine', got '" + shape + "'");
  }
  if (!(block.ramp.t_on > 0.0) || !(block.ramp.t_hold > 0.0) || !(block.ramp.t_off > 0.0)) {
    throw ConfigError("ramp times must be positive");
  }
  return block;
}

std::vector<double> log_grid(double y_min, double y_max, int points) {
  if (!(y_min > 0.0) || !(y_max > y_min)) {
    throw ConfigError("grid needs 0 < min < max");
  }
  if (points < 2) throw ConfigError("grid needs at least 2 points");
  std::vector<double> out(points);
  const double lo = std::log(y_min), hi = std::log(y_max);
  for (int i = 0; i < points; ++i) {
    out[i] = std::exp(lo + (hi - lo) * i / (points - 1));
  }
  out.front() = y_min;
  out.back() = y_max;
  return out;
}

}  // namespace eitbec::cli
