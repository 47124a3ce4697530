// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace gmot;
using namespace gmot::cli;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return 2;
    case ErrorKind::kIo: return 3;
    case ErrorKind::kShape: return 4;
    case ErrorKind::kDomain: return 5;
    case ErrorKind::kSize: return 6;
  }
  return 1;
}

struct Common {
  Overrides overrides;
  std::string format = "csv";
  std::string out = ".";
  std::size_t trim_head = 1;
  std::size_t trim_tail = 1;
};

// Parameter flags shared by align, sweep and project.
void add_parameters(CLI::App& cmd, Common& c) {
  Overrides& o = c.overrides;
  cmd.add_option("--preset", o.preset, "setting1 .. setting8");
  cmd.add_option("--alpha", o.alpha, "node/edge weight in [0, 1]");
  cmd.add_option("--rho", o.rho, "temporal prior weight");
  cmd.add_option("--beta", o.beta, "entropy weight");
  cmd.add_option("--ws", o.ws, "fusion scale");
  cmd.add_option("--lambda", o.lambda, "CTC weight in the total loss");
  cmd.add_option("--max-inner", o.max_inner, "Sinkhorn sweeps per solve");
  cmd.add_option("--max-outer", o.max_outer, "outer iterations");
  cmd.add_option("--tol", o.tol, "marginal tolerance");
  cmd.add_option("--init", o.init, "product, band, or a coupling file");
  cmd.add_option("--band-width", o.band_width, "extra half-width of the band start");
  cmd.add_option("--outer-step", o.outer_step, "entropic or proximal");
  cmd.add_option("--trim-head", c.trim_head, "leading rows excluded from the alignment loss");
  cmd.add_option("--trim-tail", c.trim_tail, "trailing rows excluded from the alignment loss");
}

void add_output(CLI::App& cmd, Common& c) {
  cmd.add_option("--format", c.format, "matrix output format: csv or bin");
  cmd.add_option("--out", c.out, "output directory");
}

RunManifest manifest_from(const Common& c) {
  RunManifest m = resolve_manifest(c.overrides);
  m.format = parse_format(c.format);
  m.out = c.out;
  m.trim_head = c.trim_head;
  m.trim_tail = c.trim_tail;
  return m;
}

int run(int argc, char** argv) {
  CLI::App app{"Optimal-transport alignment of acoustic and linguistic feature sequences"};
  app.require_subcommand(1);

  Common align_opts;
  std::string acoustic, linguistic;
  CLI::App* align = app.add_subcommand("align", "align two feature sequences");
  align->add_option("--acoustic", acoustic, "acoustic features (l_a x d)")->required();
  align->add_option("--linguistic", linguistic, "linguistic features (l_t x d)")->required();
  add_parameters(*align, align_opts);
  add_output(*align, align_opts);

  Common sweep_opts;
  std::optional<std::vector<double>> alphas, rhos, betas;
  unsigned jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid and summarize trends");
  sweep->add_option("--acoustic", acoustic, "acoustic features")->required();
  sweep->add_option("--linguistic", linguistic, "linguistic features")->required();
  sweep->add_option("--alphas", alphas, "alpha values")->delimiter(',');
  sweep->add_option("--rhos", rhos, "rho values")->delimiter(',');
  sweep->add_option("--betas", betas, "beta values")->delimiter(',');
  sweep->add_option("--jobs", jobs, "worker threads (0 = hardware concurrency)");
  add_parameters(*sweep, sweep_opts);
  add_output(*sweep, sweep_opts);

  Common project_opts;
  std::string coupling, source, target, mode = "barycentric";
  CLI::App* proj = app.add_subcommand("project", "project features through a coupling");
  proj->add_option("--coupling", coupling, "coupling matrix (l_a x l_t)")->required();
  proj->add_option("--source", source, "features to project (l_a x d)")->required();
  proj->add_option("--target", target, "reference features (l_t x d)")->required();
  proj->add_option("--mode", mode, "barycentric or raw");
  add_parameters(*proj, project_opts);
  add_output(*proj, project_opts);

  Common synth_opts;
  SynthOptions opts;
  std::string warp = "random";
  CLI::App* synth = app.add_subcommand("synth", "generate a seeded synthetic pair");
  synth->add_option("--seed", opts.seed, "random seed");
  synth->add_option("--la", opts.frames, "acoustic frames")->required();
  synth->add_option("--lt", opts.tokens, "tokens")->required();
  synth->add_option("--dim", opts.dim, "feature dimension")->required();
  synth->add_option("--warp", warp, "uniform or random segment durations");
  synth->add_option("--noise", opts.noise, "per-coordinate noise bound");
  synth->add_option("--position", opts.position, "weight of the shared positional code");
  add_output(*synth, synth_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  if (*align) {
    cmd_align(acoustic, linguistic, manifest_from(align_opts));
  } else if (*sweep) {
    SweepGrid grid;
    if (alphas) {
      if (alphas->empty()) throw UsageError("--alphas is empty");
      grid.alphas = *alphas;
    }
    if (rhos) {
      if (rhos->empty()) throw UsageError("--rhos is empty");
      grid.rhos = *rhos;
    }
    if (betas) {
      if (betas->empty()) throw UsageError("--betas is empty");
      grid.betas = *betas;
    }
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    const gmot::cli::Json trends = cmd_sweep(acoustic, linguistic, manifest_from(sweep_opts), grid, jobs);
    std::cout << "cells: " << trends["cells"].size() << '\n';
  } else if (*proj) {
    ProjectionMode m;
    if (mode == "barycentric") {
      m = ProjectionMode::kBarycentric;
    } else if (mode == "raw") {
      m = ProjectionMode::kRaw;
    } else {
      throw UsageError("unknown projection mode '" + mode + "' (expected barycentric or raw)");
    }
    const gmot::cli::Json j = cmd_project(coupling, source, target, m, manifest_from(project_opts));
    std::cout << "alignment_loss: " << j["alignment_loss"].dump() << '\n';
  } else if (*synth) {
    opts.warp = parse_warp(warp);
    RunManifest m;
    m.format = parse_format(synth_opts.format);
    m.out = synth_opts.out;
    cmd_synth(opts, m);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gmot::Error& e) {
    std::cerr << gmot::to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
