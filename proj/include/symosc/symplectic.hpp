#pragma once

#include "symosc/matcore.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symosc {

/// Candidate jump locations inside (a, b], sorted ascending.  Families that
/// know their jump structure analytically return an exhaustive list; a null
/// function means "use the generic detector".
using HintFn = std::function<std::vector<double>(double a, double b)>;
using PerIndexHintFn =
    std::function<std::vector<double>(int k, double a, double b)>;

/// The lambda-dependent symplectic coefficient sequence S_k(lambda) for
/// k = 0..N, block size n (matrices are 2n x 2n).
struct SymplecticFamily {
  int n = 0;
  int N = 0;
  std::function<Matrix(int k, double lambda)> eval;
  std::function<Matrix(int k, double lambda)> eval_deriv;  // optional, analytic

  // Optional analytic jump knowledge.
  PerIndexHintFn b_jump_hints;          // rank drops of the B block of S_k
  HintFn eigenvalue_hints;              // rank drops of the endpoint X block
  PerIndexHintFn rel_jump_hints;        // rank drops of S_k(a) - S_k(.), anchored
                                        // at the left interval endpoint
  // Rank drops of the B block of the family transformed by the fundamental
  // matrix evaluated at beta (the renormalized setting); arguments (k, beta, a, b).
  std::function<std::vector<double>(int, double, double, double)> renorm_b_hints;

  std::string label;

  Matrix coefficient(int k, double lambda) const;
  /// Analytic derivative when available, else a central difference with
  /// step 1e-6 * max(1, |lambda|).
  Matrix derivative(int k, double lambda) const;
  /// Top-right n x n block of the coefficient matrix.
  Matrix b_block(int k, double lambda) const;
};

/// 2m x m solution slice Y = (X; U) with rank m and symmetric X^T U.
class ConjoinedBasis {
 public:
  /// Validating constructor; throws ContractViolation on rank or symmetry failure.
  static ConjoinedBasis make(Matrix Y, const ToleranceConfig& cfg);
  /// Wrap without checking (internal hot paths; caller guarantees validity).
  static ConjoinedBasis wrap(Matrix Y);

  const Matrix& mat() const { return Y_; }
  int half_dim() const { return static_cast<int>(Y_.cols()); }
  Matrix X() const { return Y_.topRows(Y_.cols()); }
  Matrix U() const { return Y_.bottomRows(Y_.cols()); }

 private:
  explicit ConjoinedBasis(Matrix Y) : Y_(std::move(Y)) {}
  Matrix Y_;
};

/// Wronskian Y^T J Yhat of two conjoined bases of equal block size.
Matrix wronskian(const ConjoinedBasis& Y, const ConjoinedBasis& Yhat);

/// Fundamental matrices Z_k, k = 0..N+1, with Z_anchor = I at a fixed lambda.
struct FundamentalTrajectory {
  int anchor = 0;  // 0 or N+1
  double lambda = 0.0;
  std::vector<Matrix> Z;  // size N+2

  const Matrix& at(int k) const { return Z.at(static_cast<size_t>(k)); }
  /// Solution slice Y_k = Z_k (0 I)^T.
  Matrix basis(int k) const;
  /// (Z_k)^{-1} (0 I)^T via the algebraic symplectic inverse.
  Matrix inverse_basis(int k) const;
};

/// Propagate the fundamental matrix from the given anchor (0: forward
/// recursion, N+1: backward recursion using the algebraic inverse).
FundamentalTrajectory propagate(const SymplecticFamily& fam, double lambda,
                                int anchor, const ToleranceConfig& cfg);

/// Only the solution slice Y_k = Z_k (0 I)^T from anchor 0; cheaper than a
/// full trajectory when just the endpoint X block is needed.
Matrix principal_slice_from_zero(const SymplecticFamily& fam, double lambda,
                                 int upto_k, const ToleranceConfig& cfg);

/// Monotonicity form J^T Sdot S^{-1}, symmetrized, with the raw asymmetry.
struct MonotonicityForm {
  Matrix sym;
  double asymmetry = 0.0;
};
MonotonicityForm monotonicity_form(const Matrix& S, const Matrix& Sdot,
                                   const ToleranceConfig& cfg);

/// Grid certification that the monotonicity form stays positive semidefinite.
struct MonotonicityReport {
  bool pass = false;
  double min_eigenvalue = 0.0;
  int argmin_k = 0;
  double argmin_lambda = 0.0;
  double max_asymmetry = 0.0;
  std::vector<std::string> warnings;
};
MonotonicityReport certify_monotonicity(const SymplecticFamily& fam, double a,
                                        double b, int grid_points,
                                        const ToleranceConfig& cfg);

/// Family with coefficients R_{k+1}^{-1} S_k(lambda) R_k for a constant
/// symplectic sequence R_0..R_{N+1}.  Monotonicity is preserved; B-block jump
/// hints are not (they must be re-derived by the caller), while the anchored
/// difference jumps are invariant and keep their hints.
SymplecticFamily transform_family(const SymplecticFamily& fam,
                                  const std::vector<Matrix>& R,
                                  const ToleranceConfig& cfg);

/// Session-local cache of propagated trajectories keyed by (anchor, lambda).
class TrajectoryCache {
 public:
  TrajectoryCache(const SymplecticFamily& fam, const ToleranceConfig& cfg)
      : fam_(&fam), cfg_(cfg) {}

  std::shared_ptr<const FundamentalTrajectory> get(double lambda, int anchor) const;
  const SymplecticFamily& family() const { return *fam_; }
  const ToleranceConfig& config() const { return cfg_; }

 private:
  const SymplecticFamily* fam_;
  ToleranceConfig cfg_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, double>,
                   std::shared_ptr<const FundamentalTrajectory>>
      cache_;
};

}  // namespace symosc
