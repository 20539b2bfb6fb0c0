#pragma once

// Run configuration: line-oriented key=value documents, scenario presets and
// the precedence overrides > file > preset > built-in defaults.

#include "mstefan/fields.hpp"
#include "mstefan/grid.hpp"
#include "mstefan/mixture.hpp"
#include "mstefan/stepper.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mstefan {

struct KeyValue {
  std::string key;
  std::string value;
  /// 1-based source line, 0 for command-line overrides.
  int line = 0;
};

/// Splits `key=value` lines; blank lines and `#` comments are skipped. Throws ParseError.
std::vector<KeyValue> parse_key_values(const std::string& text);

/// Parses one `KEY=VALUE` override. Throws ParseError.
KeyValue parse_override(const std::string& text);

enum class InitialKind { Uniform, Cosine, Step };

struct InitialCondition {
  InitialKind kind = InitialKind::Cosine;
  /// Uniform and cosine: mean composition. Step: left composition.
  Vector first;
  /// Cosine: amplitude of cos(pi x / L). Step: right composition.
  Vector second;
  /// Step: interface position as a fraction of L.
  double split = 0.5;
};

struct EmitFlags {
  bool timeseries = true;
  bool snapshots = false;
  bool audit_json = true;
  bool certify_json = true;
};

struct RunConfig {
  std::string scenario = "custom";
  int species = 0;
  /// Full symmetric matrix, zero diagonal.
  Matrix D;
  ProductionLaw production = ProductionLaw::zero();
  double length = 1.0;
  int cells = 128;
  SchemeParams scheme;
  InitialCondition initial;
  std::string output_dir = "output";
  EmitFlags emit;
  int snapshot_every = 0;
  int samples = 100;
  unsigned long long seed = 1;

  MixtureSpec mixture() const;
  Grid1D grid() const;
  /// M x (N+1) initial concentrations sampled at cell centers.
  ConcentrationField initial_field() const;
};

/// Parses a configuration document. Throws ParseError, ValidationError.
RunConfig parse_config(const std::string& text);

/// Layers file entries and overrides on top of the preset named by `scenario`
/// (if any). Throws ParseError, ValidationError.
RunConfig make_config(const std::vector<KeyValue>& file, const std::vector<KeyValue>& overrides = {});

struct Preset {
  std::string name;
  std::string description;
  std::string text;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

/// Documentation of every key with its default, for --help.
std::string config_keys_help();

}  // namespace mstefan
