// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "defcast/codec.hpp"
#include "defcast/diagnostics.hpp"
#include "defcast/engine.hpp"

namespace defcast {

struct OutputSpec {
  std::string transcript;  ///< empty: <config stem>.jsonl in the output directory
  std::string summary;     ///< empty: <config stem>.summary.csv in the output directory
};

/// One simulation run as read from a JSON config file:
///
///   {
///     "protocol":   {"type": "binary" | "bounded_regression" | "multiclass" | "mean_variance", "A", "B", "m"},
///     "datum_dim":  0,
///     "kernel":     {"family": ..., "on": "f" | "x" | "fx" | "coords": [...], params, "factors" | "terms"/"weights"},
///     "reality":    {"source": "iid", "link": {...}, "datum": {"uniform": [[lo, hi], ...]}}
///                 | {"source": "adversarial", "policy": "max_residual" | "anti_forecast", "datum": {...}}
///                 | {"source": "replay", "input": "rounds.csv"},
///     "forecaster": {"type": "k29"} | {"type": "constant", "value": [...]},
///     "skeptic":    {"type": "wlln" | "exploit" | "null", "C", "initial_capital"},
///     "solver":     {"field_tol", "max_iters", "step", "grid_resolution"},
///     "horizon":    500,
///     "seed":       1,
///     "output":     {"transcript": "run.jsonl", "summary": "run.csv"}
///   }
///
/// Every key except protocol, kernel, reality and horizon has a default.
struct RunConfig {
  GameConfig game;
  OutputSpec output;
  /// Directory relative paths (replay input, outputs) resolve against.
  std::string base_dir;
};

RunConfig parse_run_config(const Json& j, const std::string& base_dir = "");
RunConfig parse_run_config_text(const std::string& text, const std::string& base_dir = "");
RunConfig load_run_config(const std::string& path);

/// Canonical form: every key explicit, in schema order.
Json to_json(const RunConfig& config);
std::string canonical_text(const RunConfig& config);
/// FNV-1a of the canonical text; identical configs (seed included) share it.
std::string config_hash(const RunConfig& config);

struct RkhsTestSpec {
  TestFunction function;
  /// Constant of the function space; absent takes the record's C_Phi.
  std::optional<double> c_f;
  /// Declared ||F||; absent derives it from the record's kernel where possible.
  std::optional<double> norm;
  /// Set for F = c.
  std::optional<double> constant;
};

/// Post-hoc analysis settings for `diagnose`:
///   {"neighborhoods": [{"f": [...], "x": [...], "f_half_widths": [...], "x_half_widths": [...]}],
///    "activity_factor": 10,
///    "tests": [{"type": "constant", "c": 1} | {"type": "tent", "center": [...], "half_widths": [...]}, "c_f"]}
struct DiagnoseConfig {
  std::vector<Neighborhood> neighborhoods;
  CalibrationOptions calibration;
  std::vector<RkhsTestSpec> tests;
};

DiagnoseConfig parse_diagnose_config(const Json& j, std::size_t forecast_dim);
DiagnoseConfig load_diagnose_config(const std::string& path, std::size_t forecast_dim);

Json read_json_file(const std::string& path);

} // namespace defcast
