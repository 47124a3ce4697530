// SPDX-License-Identifier: Apache-2.0
//
// Named parameter settings and the resolved run manifest.

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "gmot/types.hpp"
#include "matrix_io.hpp"

namespace gmot::cli {

struct Preset {
  std::string_view name;
  double alpha;
  double rho;
  double beta;
  double ws;
};

inline constexpr double kDefaultLambda = 0.3;

inline constexpr std::array<Preset, 8> kPresets = {{
    {"setting1", 0.00, 0.0, 0.05, 0.10},
    {"setting2", 0.01, 0.3, 0.30, 0.05},
    {"setting3", 0.01, 0.5, 0.50, 0.10},
    {"setting4", 0.02, 0.5, 0.50, 0.10},
    {"setting5", 0.02, 0.3, 0.50, 0.10},
    {"setting6", 0.05, 0.5, 0.50, 0.10},
    {"setting7", 0.10, 0.1, 0.30, 0.05},
    {"setting8", 0.01, 0.5, 0.50, 0.30},
}};

/// Throws UsageError for an unknown name.
const Preset& find_preset(std::string_view name);

// Explicit values given on the command line; each one overrides the preset.
struct Overrides {
  std::optional<std::string> preset;
  std::optional<double> alpha, rho, beta, ws, lambda;
  std::optional<int> max_inner, max_outer;
  std::optional<double> tol;
  std::optional<std::string> init;  // product | band | <path to a coupling file>
  std::optional<int> band_width;
  std::optional<std::string> outer_step;  // entropic | proximal
};

struct RunManifest {
  std::string preset;  // empty when no preset was named
  double ws = 0.1;
  double lambda = kDefaultLambda;
  std::string init_source = "product";
  SolverConfig solver;
  MatrixFormat format = MatrixFormat::kCsv;
  std::size_t trim_head = 1;
  std::size_t trim_tail = 1;
  std::filesystem::path out = ".";
};

/// Starts from the named preset (setting1 values when none is named) and
/// applies the overrides field by field. Validates the solver config.
RunManifest resolve_manifest(const Overrides& o);

/// Loads the user-supplied initial coupling into manifest.solver, if any.
void load_initial_coupling(RunManifest& manifest, Eigen::Index rows, Eigen::Index cols);

nlohmann::ordered_json manifest_json(const RunManifest& m);

}  // namespace gmot::cli
