#pragma once

#include <map>
#include <optional>
#include <string>

#include "raresim/experiments.hpp"

namespace raresim {

/// Parsed and SI-normalized run configuration. The atom section is either
/// a chi-override pair (the default for reproducing reported numbers) or a
/// full first-principles parameter set; exactly one of the two.
struct RunConfig {
  AtomSystem atom;
  bool override_mode = true;
  double chi_override = 0.0;        ///< m^-1
  double chi_slope_override = 0.0;  ///< m^-1 per rad/s

  Environment env;
  FieldScene scene;
  CellGeometry cell{ContinuousCell{}};
  ReceiverChain chain;
  double window_duration = 0.0;  ///< requested T_s (s)

  /// experiment-section keys, kept verbatim for subcommand-specific reads
  std::map<std::string, std::string> experiment;

  /// Operating-point Rabi frequency Omega_l = mu34 E_l / hbar.
  double lo_rabi() const;

  /// Susceptibility point: the override pair, or first-principles values
  /// computed from the quantum solver at Omega_l.
  SusceptibilityPoint resolve_chi_point() const;

  /// Cell geometry with the chi point filled in.
  CellGeometry resolve_cell() const;

  MeasurementWindow window() const;
  double radiance() const;  ///< Lambda(f_l, T_env)

  /// Linear chi model in override mode, tabulated quantum model otherwise.
  ChiModel chi_model() const;
};

/// Parses the sectioned key-value format with mandatory unit tags on
/// dimensioned fields. Errors name the offending section.key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Normalized SI dump; parse(dump_config(parse(text))) == parse(text).
std::string dump_config(const RunConfig& cfg);

/// FNV-1a hash of the normalized dump, for CSV metadata.
std::string config_hash(const RunConfig& cfg);

// experiment-section accessors with parsing and error context
double experiment_number(const RunConfig& cfg, const std::string& key,
                         double fallback);
double experiment_quantity(const RunConfig& cfg, const std::string& key,
                           const std::string& quantity, double fallback);
std::string experiment_string(const RunConfig& cfg, const std::string& key,
                              const std::string& fallback);
/// Comma-separated "number unit" list (e.g. LO direction sets).
std::vector<double> experiment_list(const RunConfig& cfg,
                                    const std::string& key,
                                    const std::string& quantity);

/// Parses "number [unit]" against a named quantity kind; used for both
/// config fields and experiment values. Context is for error messages.
double parse_quantity(const std::string& text, const std::string& quantity,
                      const std::string& context);

}  // namespace raresim
