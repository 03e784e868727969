#pragma once

#include "symosc/symplectic.hpp"

namespace symosc {

/// A lambda-parameterized matrix path to be scanned for rank jumps.
struct MatrixFamily {
  std::function<Matrix(double)> eval;
  HintFn hints;  // optional exhaustive candidates inside (a, b]
  std::string label;
};

/// A located left rank drop: rank(lambda0^-) > rank(lambda0).
struct JumpEvent {
  double lambda0 = 0.0;
  int left_rank = 0;
  int point_rank = 0;
  int multiplicity = 0;  // left_rank - point_rank >= 1
};

/// All rank-jump events in (a, b], sorted by location.  With hints the
/// candidates are probed directly; otherwise a two-mode search runs: grid
/// comparison with bisection for sustained rank changes, and a smallest-kept-
/// singular-value dip search inside cells for isolated drops.  Events closer
/// than lambda_min_gap raise ResolutionError.
std::vector<JumpEvent> scan_rank_jumps(const MatrixFamily& fam, double a,
                                       double b, const ToleranceConfig& cfg);

/// Per-step scan results over a symplectic family, with the grand total.
struct FamilyJumpReport {
  std::vector<std::vector<JumpEvent>> per_k;  // index k = 0..N
  long total = 0;
};

/// Sum of rank drops of the B blocks of S_k over (a, b], all k.
FamilyJumpReport sum_b_jumps(const SymplecticFamily& fam, double a, double b,
                             const ToleranceConfig& cfg);

/// Finite eigenvalues in (a, b]: rank drops of the top block of the principal
/// solution slice at index N+1, each with its algebraic multiplicity.
std::vector<JumpEvent> finite_eigenvalues(const SymplecticFamily& fam,
                                          double a, double b,
                                          const ToleranceConfig& cfg);

/// Sum of rank drops of lambda -> S_k(a) - S_k(lambda) over (a, b], all k.
FamilyJumpReport sum_relative_jumps(const SymplecticFamily& fam, double a,
                                    double b, const ToleranceConfig& cfg);

/// Sum of rank drops of lambda -> ref - path(lambda) over (a, b] for a
/// monotone symplectic path and a constant symplectic reference.
long sum_jumps_against(const MatrixFamily& path, const Matrix& ref, double a,
                       double b, const ToleranceConfig& cfg);

/// Index decrease ind Q(a) - ind Q(b) of a nondecreasing symmetric family;
/// equals the rank-jump sum over (a, b] and serves as a fast oracle for it.
/// Monotonicity is spot-checked by sampled difference quotients.
long monotone_index_jump(const MatrixFamily& Q, double a, double b,
                         const ToleranceConfig& cfg);

}  // namespace symosc
