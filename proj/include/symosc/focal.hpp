#pragma once

#include "symosc/symplectic.hpp"

namespace symosc {

enum class Direction { forward, backward };

/// Multiplicity of a focal point in one step interval, with its pieces.
struct FocalBreakdown {
  int rank_M = 0;
  int ind_P = 0;
  int m = 0;  // rank_M + ind_P
  Direction direction = Direction::forward;
};

/// Focal multiplicity of the step k -> k+1 for a conjoined basis pair
/// (Y_k, Y_{k+1} = S_k Y_k).  Forward uses the B block of S_k, backward its
/// transpose with the roles of X_k and X_{k+1} exchanged.
FocalBreakdown focal_multiplicity(const ConjoinedBasis& Yk,
                                  const ConjoinedBasis& Yk1, const Matrix& Sk,
                                  Direction direction,
                                  const ToleranceConfig& cfg);

/// Focal count of the principal solution anchored at l over all steps, with
/// the per-step multiplicities.
struct FocalCount {
  std::vector<FocalBreakdown> per_k;  // indices 0..N
  long total = 0;
};
FocalCount focal_count(const SymplecticFamily& fam, double lambda, int anchor,
                       Direction direction, const ToleranceConfig& cfg);

/// Same sum along an already-propagated trajectory (coefficients are taken
/// from the system the trajectory solves).
FocalCount focal_count_along(const FundamentalTrajectory& tr,
                             const SymplecticFamily& fam,
                             Direction direction, const ToleranceConfig& cfg);

}  // namespace symosc
