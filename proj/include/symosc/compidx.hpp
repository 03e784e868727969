#pragma once

#include "symosc/symplectic.hpp"

namespace symosc {

/// Breakdown of the comparative index of a pair of conjoined bases.
struct CompIndexBreakdown {
  int rank_M = 0;
  int ind_D = 0;
  int mu = 0;  // rank_M + ind_D
  Matrix M;
  Matrix D;
};

/// Comparative index mu(Y, Yhat) = rank M + ind D with
///   M = (I - X X^+) Xhat,  T = I - M^+ M,
///   D = T w(Y, Yhat)^T X^+ Xhat T   (symmetrized).
CompIndexBreakdown comparative_index(const ConjoinedBasis& Y,
                                     const ConjoinedBasis& Yhat,
                                     const ToleranceConfig& cfg);

/// Dual comparative index mu*(Y, Yhat) = rank M + ind(-D).
CompIndexBreakdown dual_comparative_index(const ConjoinedBasis& Y,
                                          const ConjoinedBasis& Yhat,
                                          const ToleranceConfig& cfg);

/// The 4n x 2n conjoined basis built from the blocks of a symplectic matrix:
/// top block [[I, 0], [A, B]], bottom block [[0, -I], [C, D]].
Matrix augment(const Matrix& S, const ToleranceConfig& cfg);

/// Sign-flip matrices of the duality principle (provided as constants).
Matrix duality_P1(int n);  // [[0, I], [I, 0]]
Matrix duality_P2(int n);  // diag(I, -I)
Matrix duality_P3(int n);  // diag(-I, I)

}  // namespace symosc
