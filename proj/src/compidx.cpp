#include "symosc/compidx.hpp"

namespace symosc {

namespace {

CompIndexBreakdown index_core(const ConjoinedBasis& Y, const ConjoinedBasis& Yhat,
                              const ToleranceConfig& cfg, bool dual) {
  if (Y.mat().rows() != Yhat.mat().rows()) {
    throw ContractViolation("comparative_index: dimension mismatch");
  }
  const auto m = Y.half_dim();
  const Matrix X = Y.X();
  const Matrix Xhat = Yhat.X();
  const Matrix Xp = pinv(X, cfg);

  CompIndexBreakdown out;
  out.M = (Matrix::Identity(m, m) - X * Xp) * Xhat;
  const Matrix T = Matrix::Identity(m, m) - pinv(out.M, cfg) * out.M;
  const Matrix w = wronskian(Y, Yhat);
  Matrix D = T * w.transpose() * Xp * Xhat * T;
  D = 0.5 * (D + D.transpose());  // exact theory guarantees symmetry
  out.D = dual ? Matrix(-D) : D;
  out.rank_M = rank_tol(out.M, cfg);
  out.ind_D = inertia_neg(out.D, cfg);
  out.mu = out.rank_M + out.ind_D;
  return out;
}

}  // namespace

CompIndexBreakdown comparative_index(const ConjoinedBasis& Y,
                                     const ConjoinedBasis& Yhat,
                                     const ToleranceConfig& cfg) {
  return index_core(Y, Yhat, cfg, /*dual=*/false);
}

CompIndexBreakdown dual_comparative_index(const ConjoinedBasis& Y,
                                          const ConjoinedBasis& Yhat,
                                          const ToleranceConfig& cfg) {
  return index_core(Y, Yhat, cfg, /*dual=*/true);
}

Matrix augment(const Matrix& S, const ToleranceConfig& cfg) {
  if (!is_symplectic(S, cfg)) {
    throw ContractViolation("augment: input not symplectic");
  }
  const int n = static_cast<int>(S.rows()) / 2;
  const Matrix I = Matrix::Identity(n, n);
  Matrix out = Matrix::Zero(4 * n, 2 * n);
  out.block(0, 0, n, n) = I;
  out.block(n, 0, n, n) = S.topLeftCorner(n, n);
  out.block(n, n, n, n) = S.topRightCorner(n, n);
  out.block(2 * n, n, n, n) = -I;
  out.block(3 * n, 0, n, n) = S.bottomLeftCorner(n, n);
  out.block(3 * n, n, n, n) = S.bottomRightCorner(n, n);
  return out;
}

Matrix duality_P1(int n) {
  Matrix P = Matrix::Zero(2 * n, 2 * n);
  P.topRightCorner(n, n) = Matrix::Identity(n, n);
  P.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return P;
}

Matrix duality_P2(int n) { return -duality_P3(n); }

Matrix duality_P3(int n) {
  Matrix P = Matrix::Identity(2 * n, 2 * n);
  P.topLeftCorner(n, n) *= -1.0;
  return P;
}

}  // namespace symosc
