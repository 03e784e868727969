#pragma once

#include "symosc/compidx.hpp"
#include "symosc/focal.hpp"
#include "symosc/lambdascan.hpp"

#include <optional>

namespace symosc {

enum class CountMethodKind {
  classical_forward,
  classical_backward,
  transformed_forward,   // caller-supplied R with R_{N+1} = I
  transformed_backward,  // caller-supplied R with R_0 = I
  renormalized_forward_a,
  renormalized_forward_b,
  renormalized_backward_a,
  renormalized_backward_b,
  invariant,
  oracle
};

struct CountMethod {
  CountMethodKind kind = CountMethodKind::classical_forward;
  std::vector<Matrix> R;  // transformed variants only

  std::string name() const;
  /// Parse a config token; the transformed variants are API-only because they
  /// carry a matrix sequence.
  static CountMethod parse(const std::string& token);
};

struct LabeledEvent {
  std::string target;  // "B", "B~", "rel", "X"
  int k = -1;          // -1 for the endpoint scan
  double lambda0 = 0.0;
  int multiplicity = 0;
};

struct CountReport {
  std::string method;
  double a = 0.0;
  double b = 0.0;
  std::vector<std::pair<std::string, long>> terms;
  std::vector<LabeledEvent> events;
  long total = 0;
};

/// Number of finite eigenvalues in (a, b] by the chosen method.  The
/// monotonicity assumption is certified on [a, b] first.
CountReport count_eigenvalues(const SymplecticFamily& fam, double a, double b,
                              const CountMethod& method,
                              const ToleranceConfig& cfg,
                              TrajectoryCache* cache = nullptr);

/// Run several methods over one shared trajectory cache.
std::vector<CountReport> count_many(const SymplecticFamily& fam, double a,
                                    double b,
                                    const std::vector<CountMethod>& methods,
                                    const ToleranceConfig& cfg);

/// Throws MethodDisagreement with a per-term breakdown if totals differ.
void verify_agreement(const std::vector<CountReport>& reports);

/// Relative oscillation numbers for the slice pair (fam at a, fam_hat at b):
/// per step the comparative-index difference of augmented transition data,
/// evaluated through both defining expressions.
struct RelativeOscillation {
  std::vector<long> per_k;      // first defining expression
  std::vector<long> per_k_alt;  // second defining expression
  long total = 0;
};
RelativeOscillation relative_oscillation_numbers(const SymplecticFamily& fam,
                                                 const SymplecticFamily& fam_hat,
                                                 double a, double b,
                                                 const ToleranceConfig& cfg);

/// Focal sum of the augmented 4n x 2n data of V_k = Zhat_k^{-1} Z_k, where
/// Zhat is anchored at N+1 and evaluated at hat_lambda and Z is anchored at 0
/// and evaluated at z_lambda.  Forward sums mu(<V_{k+1}>, <V_k>), backward
/// sums the reversed pair.
long augmented_focal_count(const SymplecticFamily& fam, double hat_lambda,
                           double z_lambda, Direction direction,
                           const ToleranceConfig& cfg,
                           TrajectoryCache* cache = nullptr);

/// Constant-rank and majorant criteria on (a, b], per step, with the
/// implication audit (constant B rank implies majorant and no anchored jumps).
struct CriteriaReport {
  std::vector<bool> b_rank_constant;                          // (i)
  std::optional<std::vector<bool>> transformed_rank_constant; // (ii) if (R, P) given
  std::vector<bool> majorant;                                 // (iii)
  std::vector<bool> rel_jumps_zero;                           // (iv)
  bool implication_ok = true;
};
CriteriaReport check_criteria(const SymplecticFamily& fam, double a, double b,
                              const ToleranceConfig& cfg,
                              const Matrix* R = nullptr,
                              const Matrix* P = nullptr);

/// Number of finite eigenvalues <= b assuming the B-block ranks are settled
/// below lambda_floor (spot-checked by a scan of a window under the floor;
/// violations raise AssumptionViolation).  Reports the focal count at the
/// floor as the constant term "floor_focal".
CountReport count_below(const SymplecticFamily& fam, double b,
                        double lambda_floor, const CountMethod& method,
                        const ToleranceConfig& cfg);

}  // namespace symosc
