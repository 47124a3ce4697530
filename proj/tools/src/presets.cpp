// SPDX-License-Identifier: Apache-2.0

#include "presets.hpp"

#include <string>

namespace gmot::cli {

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : kPresets) {
    if (p.name == name) return p;
  }
  throw UsageError("unknown preset '" + std::string(name) + "' (expected setting1..setting8)");
}

RunManifest resolve_manifest(const Overrides& o) {
  RunManifest m;
  const Preset& base = find_preset(o.preset.value_or("setting1"));
  if (o.preset) m.preset = *o.preset;
  m.solver.alpha = o.alpha.value_or(base.alpha);
  m.solver.rho = o.rho.value_or(base.rho);
  m.solver.beta = o.beta.value_or(base.beta);
  m.ws = o.ws.value_or(base.ws);
  m.lambda = o.lambda.value_or(kDefaultLambda);
  if (o.max_inner) m.solver.max_inner_iters = *o.max_inner;
  if (o.max_outer) m.solver.max_outer_iters = *o.max_outer;
  if (o.tol) m.solver.marginal_tol = *o.tol;
  if (o.band_width) m.solver.band_width = *o.band_width;
  if (o.outer_step) {
    if (*o.outer_step == "entropic") {
      m.solver.outer_step = OuterStep::kEntropic;
    } else if (*o.outer_step == "proximal") {
      m.solver.outer_step = OuterStep::kProximal;
    } else {
      throw UsageError("unknown outer step '" + *o.outer_step + "' (entropic or proximal)");
    }
  }
  if (o.init) {
    m.init_source = *o.init;
    if (*o.init == "product") {
      m.solver.init = InitMode::kProduct;
    } else if (*o.init == "band") {
      m.solver.init = InitMode::kIdentityBand;
    } else {
      m.solver.init = InitMode::kUserSupplied;
    }
  }
  if (!(m.ws >= 0.0)) throw DomainError("ws must be nonnegative");
  if (!(m.lambda >= 0.0 && m.lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  if (m.solver.init != InitMode::kUserSupplied) m.solver.validate();
  return m;
}

void load_initial_coupling(RunManifest& manifest, Eigen::Index rows, Eigen::Index cols) {
  if (manifest.solver.init != InitMode::kUserSupplied) return;
  Matrix plan = read_matrix(manifest.init_source);
  if (plan.rows() != rows || plan.cols() != cols) {
    throw ShapeError(manifest.init_source + ": initial coupling is " + std::to_string(plan.rows()) + "x" +
                     std::to_string(plan.cols()) + ", expected " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  manifest.solver.initial_coupling = Coupling(std::move(plan), uniform_marginal(static_cast<std::size_t>(rows)),
                                              uniform_marginal(static_cast<std::size_t>(cols)));
  manifest.solver.validate();
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["preset"] = m.preset.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(m.preset);
  j["alpha"] = m.solver.alpha;
  j["rho"] = m.solver.rho;
  j["beta"] = m.solver.beta;
  j["ws"] = m.ws;
  j["lambda"] = m.lambda;
  j["max_inner"] = m.solver.max_inner_iters;
  j["max_outer"] = m.solver.max_outer_iters;
  j["tol"] = m.solver.marginal_tol;
  j["objective_rel_tol"] = m.solver.objective_rel_tol;
  j["init"] = m.init_source;
  j["band_width"] = m.solver.band_width;
  j["outer_step"] = std::string(to_string(m.solver.outer_step));
  return j;
}

}  // namespace gmot::cli
