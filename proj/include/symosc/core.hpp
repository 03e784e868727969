#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace symosc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Input violates a documented precondition (dimension mismatch,
/// non-symplectic coefficient, asymmetric matrix, ...).
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A matrix decomposition failed to converge.
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The generic jump detector found events closer than the configured
/// minimum gap; caller must refine the configuration or supply hints.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A standing assumption stated by the caller does not hold on probing.
struct AssumptionViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two counting methods that must agree returned different totals.
struct MethodDisagreement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shared numeric thresholds.  Rank and inertia decisions are made
/// relative to the matrix scale with an absolute floor of 1 so that
/// families passing smoothly through zero are classified consistently.
struct ToleranceConfig {
  double tol_rank = 1e-8;        // singular values below tol_rank*max(sigma_max,1) are zero
  double tol_eig = 1e-8;         // symmetric eigenvalues within the scaled band are zero
  double tol_symp = 1e-10;       // max-norm residual scale for symplecticity checks
  double delta_probe = 1e-6;     // offset used to evaluate one-sided limits in lambda
  double lambda_min_gap = 1e-3;  // assumed minimum separation of rank-jump points

  void validate() const;

  /// Copy with a different jump-separation assumption, keeping
  /// delta_probe < lambda_min_gap / 2 valid.
  ToleranceConfig with_gap(double gap) const;
};

}  // namespace symosc
