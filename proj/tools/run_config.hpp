#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eitbec/dark_state.hpp"
#include "eitbec/decay_rates.hpp"
#include "eitbec/gas_model.hpp"
#include "table.hpp"

namespace eitbec::cli {

/// Flat `key = value` configuration with `#` comments and dotted section
/// prefixes (gas., coupling., scan., ramp., quad.). Typed getters mark keys
/// as consumed; anything left unconsumed after a subcommand has pulled its
/// blocks is an error, so misdirected or misspelled keys never pass silently.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);          // overwrite
  void set_default(const std::string& key, const std::string& value);  // keep existing
  bool has(const std::string& key) const;

  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::optional<double> get_optional_double(const std::string& key) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  int get_int_or(const std::string& key, int fallback) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  /// Comma-separated list of doubles.
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list_or(const std::string& key,
                                  const std::vector<double>& fallback) const;

  /// Keys never touched by a getter. Must be empty once a subcommand has
  /// finished pulling its configuration.
  std::vector<std::string> unconsumed() const;
  void require_fully_consumed() const;

 private:
  std::string raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

/// Named parameter presets. "hau1999" fills the gas block of the sodium
/// slow-light condensate (a = 2.8 nm, n0 = 8e13 cm^-3, Tc = 435 nK,
/// eps_CB/hbar = (2pi) 1.8 GHz); "hau2001" fills the coupling block of the
/// light-storage system (omega = (2pi) 5.61 MHz, g sqrt(N0) = (2pi) 15 MHz,
/// gamma_A = (2pi) 10 MHz, n = 3e4). Throws ConfigError for unknown names.
void apply_preset(KeyValueConfig& cfg, const std::string& name);

/// gas.* block -> validated condensate parameters.
CondensateParams parse_gas_block(const KeyValueConfig& cfg);

struct CouplingBlock {
  CouplingConfig coupling;
  GammaAPlacement placement = GammaAPlacement::excited_state;
};

/// coupling.* block. Either coupling.g_root_n0_rad_per_s or
/// coupling.theta_rad selects the primary parametrization.
CouplingBlock parse_coupling_block(const KeyValueConfig& cfg);

/// quad.* block; every key optional.
QuadratureSettings parse_quad_block(const KeyValueConfig& cfg);

struct RampBlock {
  StorageRamp ramp;
};

/// ramp.* block for the store subcommand.
RampBlock parse_ramp_block(const KeyValueConfig& cfg);

/// Strictly increasing grid of y_k values, logarithmically spaced.
std::vector<double> log_grid(double y_min, double y_max, int points);

}  // namespace eitbec::cli
