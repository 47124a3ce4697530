// SPDX-License-Identifier: Apache-2.0
//
// Core value types shared by every solver: feature sequences, marginals,
// ground-cost matrices, couplings and the solver configuration.
//
// All types validate their invariants on construction and are immutable
// afterwards, so they can be shared freely between threads.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace gmot {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Error categories double as the CLI's message prefixes.
enum class ErrorKind { kUsage, kIo, kShape, kDomain, kSize };

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& m) : Error(ErrorKind::kUsage, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string& m) : Error(ErrorKind::kShape, m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorKind::kDomain, m) {}
};
struct SizeError : Error {
  explicit SizeError(const std::string& m) : Error(ErrorKind::kSize, m) {}
};

/// A length-L sequence of d-dimensional feature vectors, one per row.
///
/// Every entry is finite and every row has a strictly positive Euclidean
/// norm, since all costs built from it are cosine distances.
class FeatureSequence {
 public:
  explicit FeatureSequence(Matrix values);

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index dim() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }
  auto row(Eigen::Index i) const { return values_.row(i); }

 private:
  Matrix values_;
};

/// Strictly positive probability vector.
class Marginal {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit Marginal(Vector weights);

  Eigen::Index size() const noexcept { return weights_.size(); }
  const Vector& weights() const noexcept { return weights_; }
  double operator[](Eigen::Index i) const { return weights_[i]; }

 private:
  Vector weights_;
};

Marginal uniform_marginal(std::size_t length);

enum class CostKind { kCrossModal, kIntraModal, kTemporal, kFused };

std::string_view to_string(CostKind kind);

/// Nonnegative finite ground cost. Intra-modal costs are additionally square,
/// symmetric and zero on the diagonal.
class CostMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  CostMatrix(Matrix values, CostKind kind);

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }
  CostKind kind() const noexcept { return kind_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Matrix values_;
  CostKind kind_;
};

/// Transport plan with its target marginals attached. Entries are finite and
/// nonnegative; how closely the plan meets the marginals is reported by
/// validate_coupling rather than enforced here.
class Coupling {
 public:
  Coupling(Matrix plan, Marginal row_marginal, Marginal col_marginal);

  // Builds a coupling whose marginals are the plan's own normalized row and
  // column sums. Throws DomainError if any row or column carries no mass.
  static Coupling from_plan(Matrix plan);

  Eigen::Index rows() const noexcept { return plan_.rows(); }
  Eigen::Index cols() const noexcept { return plan_.cols(); }
  const Matrix& plan() const noexcept { return plan_; }
  const Marginal& row_marginal() const noexcept { return row_marginal_; }
  const Marginal& col_marginal() const noexcept { return col_marginal_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return plan_(i, j); }

 private:
  Matrix plan_;
  Marginal row_marginal_;
  Marginal col_marginal_;
};

struct CouplingReport {
  double max_row_violation = 0.0;
  double max_col_violation = 0.0;
  double min_entry = 0.0;
  bool passed = false;
};

CouplingReport validate_coupling(const Coupling& coupling, double tol);

enum class InitMode { kProduct, kIdentityBand, kUserSupplied };

// How each outer iteration of the Gromov solvers turns the linearized cost
// into the next plan. kEntropic solves the entropic problem on the
// linearized cost (a KL mirror step of length 1/beta, which drops the
// previous plan from the kernel). kProximal keeps the previous plan in the
// kernel, exp(-C/beta) * plan, which drives the iterates towards the
// unregularized optimum.
enum class OuterStep { kEntropic, kProximal };

std::string_view to_string(InitMode mode);
std::string_view to_string(OuterStep step);

struct SolverConfig {
  double beta = 0.05;   // entropy weight
  double alpha = 0.0;   // 0 = node cost only, 1 = edge cost only
  double rho = 0.0;     // temporal prior weight
  int max_inner_iters = 2000;
  int max_outer_iters = 50;
  double marginal_tol = 1e-9;
  double objective_rel_tol = 1e-7;
  InitMode init = InitMode::kProduct;
  // Required when init == kUserSupplied.
  std::optional<Coupling> initial_coupling;
  // Extra half-width, in cells, of the identity-band start around the
  // monotone staircase plan. 0 starts from the staircase itself.
  int band_width = 0;
  OuterStep outer_step = OuterStep::kEntropic;
  // Temporal prior positions: false uses i/l, true uses (i-1)/(l-1).
  bool centered_positions = false;
  // When false and alpha > 0, the fused solve uses the unblended node cost.
  bool temporal_in_fused = true;

  // Throws DomainError on out-of-range parameters.
  void validate() const;
};

}  // namespace gmot
