#pragma once

#include "symosc/core.hpp"

namespace symosc {

/// Counted inertia of a symmetric matrix under the tolerance classification.
struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

/// The standard skew matrix J = [[0, I], [-I, 0]] of size 2n x 2n.
Matrix standard_skew(int two_n);

/// Numerical rank: number of singular values above tol_rank * max(sigma_max, 1).
int rank_tol(const Matrix& A, const ToleranceConfig& cfg);

/// Moore-Penrose pseudoinverse with the same singular-value threshold as rank_tol.
Matrix pinv(const Matrix& A, const ToleranceConfig& cfg);

/// Eigenvalue signs of the symmetrized input, classified against
/// tol_eig * max(|eig|_max, 1).
Inertia inertia(const Matrix& A, const ToleranceConfig& cfg);

/// Number of negative eigenvalues of a symmetric matrix.  Rejects inputs whose
/// asymmetry exceeds tol_symp * max(norm, 1); computes on (A + A^T)/2.
int inertia_neg(const Matrix& A, const ToleranceConfig& cfg);

/// True iff ||S^T J S - J||_max <= tol_symp * max(||S||_max^2, 1).
bool is_symplectic(const Matrix& S, const ToleranceConfig& cfg);

/// Algebraic inverse -J S^T J of a symplectic matrix; exact group structure
/// up to rounding, no linear solve involved.
Matrix symplectic_inverse(const Matrix& S);

}  // namespace symosc
