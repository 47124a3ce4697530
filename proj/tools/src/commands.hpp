// SPDX-License-Identifier: Apache-2.0
//
// The four subcommands, callable without the argument parser.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gmot/fused.hpp"
#include "gmot/transfer.hpp"
#include "json.hpp"
#include "presets.hpp"

namespace gmot::cli {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Diagnostics document for one alignment run.
Json alignment_diagnostics(const RunManifest& manifest, const AlignmentResult& result);

/// Writes coupling.csv (and coupling.bin for --format bin) plus
/// diagnostics.json under manifest.out. Returns the diagnostics.
Json cmd_align(const fs::path& acoustic, const fs::path& linguistic, RunManifest manifest);

struct SweepGrid {
  std::vector<double> alphas;
  std::vector<double> rhos;
  std::vector<double> betas;
};

/// Runs every (alpha, rho, beta) cell of the grid, each into its own
/// directory, then writes trends.json. Axes left empty take the manifest's
/// value; a grid with every axis empty is a usage error. Cells run on up to
/// `jobs` threads.
Json cmd_sweep(const fs::path& acoustic, const fs::path& linguistic, const RunManifest& manifest,
               const SweepGrid& grid, unsigned jobs);

/// Projects source features through a coupling file and scores them against
/// the target. Writes projected.<ext> and loss.json.
Json cmd_project(const fs::path& coupling, const fs::path& source, const fs::path& target,
                 ProjectionMode mode, const RunManifest& manifest);

enum class Warp { kUniform, kRandom };

Warp parse_warp(const std::string& name);

struct SynthOptions {
  std::uint64_t seed = 0;
  Eigen::Index frames = 0;  // l_a
  Eigen::Index tokens = 0;  // l_t
  Eigen::Index dim = 0;
  Warp warp = Warp::kRandom;
  double noise = 0.1;  // per-coordinate bound before renormalization
  // Weight of a shared sinusoidal code of normalized position added to both
  // sequences, as a positional encoding would. Frame i sits at (i + 1/2) / l_a,
  // token j at (j + 1/2) / l_t.
  double position = 0.0;
};

struct SynthData {
  Matrix acoustic;
  Matrix linguistic;
  std::vector<Eigen::Index> boundaries;  // l_t + 1 frame offsets, 0 .. l_a
};

SynthData synthesize(const SynthOptions& opts);

/// Writes acoustic.<ext>, linguistic.<ext> and boundaries.json.
Json cmd_synth(const SynthOptions& opts, const RunManifest& manifest);

}  // namespace gmot::cli
