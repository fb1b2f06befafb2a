#pragma once

// Run configuration.
//
// The file format is a strict subset of TOML: `[section]` headers,
// `key = value` lines, `#` comments, and values that are numbers, booleans,
// double-quoted strings, or single-line arrays of numbers. A top-level
// `preset = "<name>"` starts from one of the named experiment presets;
// every other key overrides it. Unknown sections or keys are errors.

#include <string>
#include <vector>

#include "qnls/diagnostics.hpp"
#include "qnls/fields.hpp"
#include "qnls/ground_state.hpp"
#include "qnls/propagators.hpp"

namespace qnls {

struct GridConfig {
  GridKind kind = GridKind::Radial5D;
  int n = 256;
  double extent = 20.0;
  double cluster = kDefaultRadialCluster;  // radial grids only

  Grid build() const;
  bool operator==(const GridConfig&) const = default;
};

/// Initial data. kind is one of
///   zero            (0, 0)
///   gaussian        u = amplitude g, v = v_amplitude g, g = exp(-(x / width)^2)
///   scaled-gaussian u = scale φ(0) g, v = scale ψ(0) g with the reference ground state
///   ground-state    scale (φ, ψ), resampled onto the run grid
///   checkpoint      scale (φ, ψ) from a ground-state checkpoint file
/// On periodic grids the data is boosted by xi afterwards.
struct InitialConfig {
  std::string kind = "gaussian";
  double amplitude = 1.0;
  double v_amplitude = 0.5;
  double width = 1.0;
  double scale = 1.0;
  double xi = 0.0;
  std::string checkpoint;

  bool operator==(const InitialConfig&) const = default;
};

struct GroundStateConfig {
  GridConfig grid;
  SolverOptions solver;
  std::vector<double> widths{2.0};

  bool operator==(const GroundStateConfig&) const = default;
};

struct DiagnosticsConfig {
  double virial_radius = 0.0;  // 0: half the grid extent
  ClassifierOptions classifier;
  double xi = 2.0;             // galilean: boost
  double galilean_t = 1.0;     // galilean: evolution time
  double virial_tol = 5e-2;
  double covariance_tol = 1e-6;
  double x_of_t_tol = 1e-6;

  bool operator==(const DiagnosticsConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  int sample_every = 1;
  int snapshot_every = 0;

  bool operator==(const OutputConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> kappas{0.5, 1.0, 2.0};
  std::vector<double> omegas{0.5, 1.0, 2.0, 4.0};
  double product_tol = 1e-6;  // ω-invariance of E M across the sweep

  bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
  std::string preset;  // empty: built-in defaults
  GridConfig grid;
  PhysicsParams physics;
  InitialConfig initial;
  GroundStateConfig ground_state;
  EvolveOptions evolve;  // sample/snapshot cadence come from output
  DiagnosticsConfig diagnostics;
  OutputConfig output;
  SweepConfig sweep;

  /// EvolveOptions with the output cadence and virial radius folded in.
  EvolveOptions evolve_options() const;
  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& preset_names();
/// Throws ConfigError(UnknownChoice) listing the valid names.
RunConfig preset_config(const std::string& name);

/// Reads and validates a config file. Errors carry the section, key and
/// line of the offending entry.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

/// Range checks on every field; throws ConfigError(Range).
void validate_config(const RunConfig& cfg);

/// TOML text that parse_config maps back to an equal RunConfig.
std::string dump_config(const RunConfig& cfg);

}  // namespace qnls
