// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

#include "gmot/diagnostics.hpp"
#include "gmot/sinkhorn.hpp"

namespace gmot::cli {
namespace {

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError(path.string() + ": write failed");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": " + ec.message());
}

FeatureSequence load_features(const fs::path& path) {
  Matrix m = read_matrix(path);
  try {
    return FeatureSequence(std::move(m));
  } catch (const DomainError& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

Json input_json(const fs::path& path, const FeatureSequence& f) {
  return Json{{"path", path.string()}, {"rows", f.rows()}, {"dim", f.dim()}};
}

std::string label(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// One trend line: the values along one axis with the other two held fixed.
struct Line {
  Json fixed;
  std::vector<std::pair<double, double>> points;
};

Json trend_json(std::map<std::pair<double, double>, Line>& lines, const char* axis, const char* value,
                bool increasing) {
  Json out = Json::array();
  for (auto& [key, line] : lines) {
    std::sort(line.points.begin(), line.points.end());
    bool monotone = true;
    Json points = Json::array();
    for (std::size_t k = 0; k < line.points.size(); ++k) {
      points.push_back(Json{{axis, line.points[k].first}, {value, line.points[k].second}});
      if (k > 0) {
        const double prev = line.points[k - 1].second;
        const double cur = line.points[k].second;
        monotone = monotone && (increasing ? cur >= prev : cur <= prev);
      }
    }
    Json entry = line.fixed;
    entry["points"] = std::move(points);
    entry[increasing ? "nondecreasing" : "nonincreasing"] = monotone;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<Eigen::Index> segment_lengths(const SynthOptions& opts, std::mt19937_64& rng) {
  const Eigen::Index la = opts.frames;
  const Eigen::Index lt = opts.tokens;
  std::vector<Eigen::Index> len(static_cast<std::size_t>(lt), 1);
  if (opts.warp == Warp::kUniform) {
    for (Eigen::Index j = 0; j < lt; ++j) len[static_cast<std::size_t>(j)] = (j + 1) * la / lt - j * la / lt;
    return len;
  }
  // Random durations: one frame each, the rest split by largest remainder
  // of weights drawn from [0.25, 1.75].
  std::uniform_real_distribution<double> dist(0.25, 1.75);
  std::vector<double> w(static_cast<std::size_t>(lt));
  for (double& x : w) x = dist(rng);
  double total = 0.0;
  for (double x : w) total += x;
  const Eigen::Index spare = la - lt;
  std::vector<std::pair<double, std::size_t>> rem;
  Eigen::Index used = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double share = static_cast<double>(spare) * w[j] / total;
    const auto whole = static_cast<Eigen::Index>(std::floor(share));
    len[j] += whole;
    used += whole;
    rem.emplace_back(share - static_cast<double>(whole), j);
  }
  std::sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  for (Eigen::Index k = 0; k < spare - used; ++k) ++len[rem[static_cast<std::size_t>(k)].second];
  return len;
}

// Unit-norm code of t in [0, 1] built from the lowest d/2 frequencies.
Vector position_code(double t, Eigen::Index dim) {
  const Eigen::Index pairs = dim / 2;
  Vector pe = Vector::Zero(dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(pairs));
  for (Eigen::Index k = 0; k < pairs; ++k) {
    const double w = std::numbers::pi * static_cast<double>(k + 1) * t;
    pe[2 * k] = scale * std::cos(w);
    pe[2 * k + 1] = scale * std::sin(w);
  }
  return pe;
}

double centre(Eigen::Index i, Eigen::Index n) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

void normalize_row(Matrix& m, Eigen::Index i, const std::string& what) {
  const double norm = m.row(i).norm();
  if (!(norm > 1e-9)) throw DomainError("synthetic " + what + " row " + std::to_string(i) + " vanished");
  m.row(i) /= norm;
}

}  // namespace

Json alignment_diagnostics(const RunManifest& manifest, const AlignmentResult& result) {
  const FusedResult& s = result.solve;
  const SolveDiagnostics& d = s.diagnostics;
  const double alpha = manifest.solver.alpha;
  Json j;
  j["parameters"] = manifest_json(manifest);
  j["l_a"] = s.coupling.rows();
  j["l_t"] = s.coupling.cols();
  j["loss"] = Json{{"fgwd", s.loss},
                   {"wd", s.node_cost},
                   {"gwd", s.edge_cost},
                   {"wd_weighted", (1.0 - alpha) * s.node_cost},
                   {"gwd_weighted", alpha * s.edge_cost}};
  j["entropy"] = d.final_entropy;
  j["entropic_objective"] = d.entropic_objective;
  j["outer_iterations"] = d.iterations;
  j["inner_iterations"] = d.inner_iterations;
  j["converged"] = d.converged;
  j["rounded"] = d.rounded;
  j["marginal_violation"] = d.final_marginal_violation;
  j["scaling_violation"] = d.scaling_violation;
  j["band_mass"] = Json{{"width", kDefaultBandWidth}, {"value", band_mass(s.coupling.plan())}};
  j["token_durations"] = token_durations(s.coupling.plan());
  j["duration_variance"] = duration_variance(s.coupling.plan());
  j["objective_trace"] = d.objective_trace;
  return j;
}

Json cmd_align(const fs::path& acoustic, const fs::path& linguistic, RunManifest manifest) {
  const FeatureSequence h = load_features(acoustic);
  const FeatureSequence z = load_features(linguistic);
  if (h.dim() != z.dim()) {
    throw ShapeError(acoustic.string() + " has dim " + std::to_string(h.dim()) + " but " +
                     linguistic.string() + " has dim " + std::to_string(z.dim()));
  }
  load_initial_coupling(manifest, h.rows(), z.rows());
  const AlignmentResult result = align_sequences(h, z, manifest.solver);

  Json diag;
  diag["inputs"] = Json{{"acoustic", input_json(acoustic, h)}, {"linguistic", input_json(linguistic, z)}};
  diag.update(alignment_diagnostics(manifest, result));

  ensure_dir(manifest.out);
  write_matrix(manifest.out / "coupling.csv", result.solve.coupling.plan(), MatrixFormat::kCsv);
  if (manifest.format == MatrixFormat::kBinary) {
    write_matrix(manifest.out / "coupling.bin", result.solve.coupling.plan(), MatrixFormat::kBinary);
  }
  write_json(manifest.out / "diagnostics.json", diag);
  return diag;
}

Json cmd_sweep(const fs::path& acoustic, const fs::path& linguistic, const RunManifest& manifest,
               const SweepGrid& grid, unsigned jobs) {
  if (grid.alphas.empty() && grid.rhos.empty() && grid.betas.empty()) {
    throw UsageError("empty sweep grid: give at least one of --alphas, --rhos, --betas");
  }
  const auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  const std::vector<double> alphas = axis(grid.alphas, manifest.solver.alpha);
  const std::vector<double> rhos = axis(grid.rhos, manifest.solver.rho);
  const std::vector<double> betas = axis(grid.betas, manifest.solver.beta);

  const FeatureSequence h = load_features(acoustic);
  const FeatureSequence z = load_features(linguistic);
  if (h.dim() != z.dim()) {
    throw ShapeError(acoustic.string() + " has dim " + std::to_string(h.dim()) + " but " +
                     linguistic.string() + " has dim " + std::to_string(z.dim()));
  }

  std::vector<RunManifest> cells;
  for (double a : alphas) {
    for (double r : rhos) {
      for (double b : betas) {
        RunManifest cell = manifest;
        cell.solver.alpha = a;
        cell.solver.rho = r;
        cell.solver.beta = b;
        cell.out = manifest.out / ("cell_" + std::to_string(cells.size()) + "_alpha" + label(a) + "_rho" +
                                   label(r) + "_beta" + label(b));
        load_initial_coupling(cell, h.rows(), z.rows());
        cell.solver.validate();
        cells.push_back(std::move(cell));
      }
    }
  }
  ensure_dir(manifest.out);

  std::vector<Json> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      try {
        const AlignmentResult r = align_sequences(h, z, cells[k].solver);
        Json diag = alignment_diagnostics(cells[k], r);
        ensure_dir(cells[k].out);
        write_matrix(cells[k].out / "coupling.csv", r.solve.coupling.plan(), MatrixFormat::kCsv);
        write_json(cells[k].out / "diagnostics.json", diag);
        results[k] = std::move(diag);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::map<std::pair<double, double>, Line> by_rho, by_beta, by_alpha;
  Json cell_list = Json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const SolverConfig& c = cells[k].solver;
    const Json& r = results[k];
    cell_list.push_back(Json{{"directory", cells[k].out.filename().string()},
                             {"alpha", c.alpha},
                             {"rho", c.rho},
                             {"beta", c.beta},
                             {"fgwd", r["loss"]["fgwd"]},
                             {"band_mass", r["band_mass"]["value"]},
                             {"entropy", r["entropy"]},
                             {"duration_variance", r["duration_variance"]}});
    Line& lr = by_rho[{c.alpha, c.beta}];
    lr.fixed = Json{{"alpha", c.alpha}, {"beta", c.beta}};
    lr.points.emplace_back(c.rho, r["band_mass"]["value"].get<double>());
    Line& lb = by_beta[{c.alpha, c.rho}];
    lb.fixed = Json{{"alpha", c.alpha}, {"rho", c.rho}};
    lb.points.emplace_back(c.beta, r["entropy"].get<double>());
    Line& la = by_alpha[{c.rho, c.beta}];
    la.fixed = Json{{"rho", c.rho}, {"beta", c.beta}};
    la.points.emplace_back(c.alpha, r["duration_variance"].get<double>());
  }

  Json trends;
  trends["inputs"] = Json{{"acoustic", input_json(acoustic, h)}, {"linguistic", input_json(linguistic, z)}};
  trends["parameters"] = manifest_json(manifest);
  trends["cells"] = std::move(cell_list);
  trends["band_mass_vs_rho"] = trend_json(by_rho, "rho", "band_mass", true);
  trends["entropy_vs_beta"] = trend_json(by_beta, "beta", "entropy", true);
  trends["duration_variance_vs_alpha"] = trend_json(by_alpha, "alpha", "duration_variance", false);
  write_json(manifest.out / "trends.json", trends);
  return trends;
}

Json cmd_project(const fs::path& coupling, const fs::path& source, const fs::path& target,
                 ProjectionMode mode, const RunManifest& manifest) {
  const Coupling gamma = Coupling::from_plan(read_matrix(coupling));
  const FeatureSequence h = load_features(source);
  const FeatureSequence z = load_features(target);
  if (gamma.rows() != h.rows()) {
    throw ShapeError(coupling.string() + " has " + std::to_string(gamma.rows()) + " rows but " +
                     source.string() + " has " + std::to_string(h.rows()));
  }
  const FeatureSequence projected = project(gamma, h, mode);
  const double loss = alignment_loss(projected, z, manifest.trim_head, manifest.trim_tail);

  ensure_dir(manifest.out);
  const fs::path out_path = manifest.out / ("projected" + std::string(extension(manifest.format)));
  write_matrix(out_path, projected.values(), manifest.format);
  Json j;
  j["coupling"] = coupling.string();
  j["source"] = input_json(source, h);
  j["target"] = input_json(target, z);
  j["mode"] = mode == ProjectionMode::kRaw ? "raw" : "barycentric";
  j["trim_head"] = manifest.trim_head;
  j["trim_tail"] = manifest.trim_tail;
  j["alignment_loss"] = loss;
  write_json(manifest.out / "loss.json", j);
  return j;
}

Warp parse_warp(const std::string& name) {
  if (name == "uniform") return Warp::kUniform;
  if (name == "random") return Warp::kRandom;
  throw UsageError("unknown warp profile '" + name + "' (expected uniform or random)");
}

SynthData synthesize(const SynthOptions& opts) {
  if (opts.tokens < 1) throw UsageError("synth needs at least one token");
  if (opts.frames < opts.tokens) throw UsageError("synth needs at least as many frames as tokens");
  if (opts.dim < 2) throw UsageError("synth needs dimension at least 2");
  if (!(opts.noise >= 0.0) || !std::isfinite(opts.noise)) throw UsageError("noise must be nonnegative");
  if (!(opts.position >= 0.0) || !std::isfinite(opts.position)) {
    throw UsageError("position weight must be nonnegative");
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SynthData out;
  out.linguistic.resize(opts.tokens, opts.dim);
  for (Eigen::Index j = 0; j < opts.tokens; ++j) {
    double norm = 0.0;
    while (!(norm > 1e-6)) {
      for (Eigen::Index k = 0; k < opts.dim; ++k) out.linguistic(j, k) = gauss(rng);
      norm = out.linguistic.row(j).norm();
    }
    out.linguistic.row(j) /= norm;
  }
  const Matrix content = out.linguistic;
  if (opts.position > 0.0) {
    for (Eigen::Index j = 0; j < opts.tokens; ++j) {
      out.linguistic.row(j) += opts.position * position_code(centre(j, opts.tokens), opts.dim).transpose();
      normalize_row(out.linguistic, j, "token");
    }
  }

  const std::vector<Eigen::Index> len = segment_lengths(opts, rng);
  out.boundaries.push_back(0);
  for (Eigen::Index l : len) out.boundaries.push_back(out.boundaries.back() + l);

  std::uniform_real_distribution<double> jitter(-opts.noise, opts.noise);
  out.acoustic.resize(opts.frames, opts.dim);
  for (Eigen::Index j = 0; j < opts.tokens; ++j) {
    for (Eigen::Index i = out.boundaries[static_cast<std::size_t>(j)];
         i < out.boundaries[static_cast<std::size_t>(j) + 1]; ++i) {
      if (opts.noise == 0.0 && opts.position == 0.0) {
        out.acoustic.row(i) = content.row(j);
        continue;
      }
      for (Eigen::Index k = 0; k < opts.dim; ++k) {
        out.acoustic(i, k) = content(j, k) + (opts.noise > 0.0 ? jitter(rng) : 0.0);
      }
      if (opts.position > 0.0) {
        out.acoustic.row(i) += opts.position * position_code(centre(i, opts.frames), opts.dim).transpose();
      }
      normalize_row(out.acoustic, i, "frame");
    }
  }
  return out;
}

Json cmd_synth(const SynthOptions& opts, const RunManifest& manifest) {
  const SynthData data = synthesize(opts);
  ensure_dir(manifest.out);
  const std::string ext(extension(manifest.format));
  write_matrix(manifest.out / ("acoustic" + ext), data.acoustic, manifest.format);
  write_matrix(manifest.out / ("linguistic" + ext), data.linguistic, manifest.format);
  Json segments = Json::array();
  for (std::size_t j = 0; j + 1 < data.boundaries.size(); ++j) {
    segments.push_back(Json{{"token", j}, {"start", data.boundaries[j]}, {"end", data.boundaries[j + 1]}});
  }
  Json j;
  j["seed"] = opts.seed;
  j["l_a"] = opts.frames;
  j["l_t"] = opts.tokens;
  j["dim"] = opts.dim;
  j["warp"] = opts.warp == Warp::kUniform ? "uniform" : "random";
  j["noise"] = opts.noise;
  j["position"] = opts.position;
  j["segments"] = std::move(segments);
  write_json(manifest.out / "boundaries.json", j);
  return j;
}

}  // namespace gmot::cli
