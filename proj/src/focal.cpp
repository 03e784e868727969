#include "symosc/focal.hpp"

namespace symosc {

FocalBreakdown focal_multiplicity(const ConjoinedBasis& Yk,
                                  const ConjoinedBasis& Yk1, const Matrix& Sk,
                                  Direction direction,
                                  const ToleranceConfig& cfg) {
  const int n = Yk.half_dim();
  if (Yk1.half_dim() != n || Sk.rows() != 2 * n || Sk.cols() != 2 * n) {
    throw ContractViolation("focal_multiplicity: dimension mismatch");
  }
  {
    const Matrix resid = Yk1.mat() - Sk * Yk.mat();
    const double scale = std::max(
        {1.0, Sk.cwiseAbs().maxCoeff() * Yk.mat().cwiseAbs().maxCoeff()});
    if (resid.cwiseAbs().maxCoeff() > 1e3 * cfg.tol_symp * scale) {
      throw ContractViolation(
          "focal_multiplicity: Y_{k+1} is not S_k Y_k within tolerance");
    }
  }
  const Matrix B = Sk.topRightCorner(n, n);
  const Matrix I = Matrix::Identity(n, n);

  FocalBreakdown out;
  out.direction = direction;
  if (direction == Direction::forward) {
    const Matrix Xk = Yk.X();
    const Matrix Xk1p = pinv(Yk1.X(), cfg);
    const Matrix M = (I - Yk1.X() * Xk1p) * B;
    const Matrix T = I - pinv(M, cfg) * M;
    Matrix P = T * Xk * Xk1p * B * T;
    P = 0.5 * (P + P.transpose());
    out.rank_M = rank_tol(M, cfg);
    out.ind_P = inertia_neg(P, cfg);
  } else {
    const Matrix Xk1 = Yk1.X();
    const Matrix Xkp = pinv(Yk.X(), cfg);
    const Matrix Bt = B.transpose();
    const Matrix M = (I - Yk.X() * Xkp) * Bt;
    const Matrix T = I - pinv(M, cfg) * M;
    Matrix P = T.transpose() * Xk1 * Xkp * Bt * T;
    P = 0.5 * (P + P.transpose());
    out.rank_M = rank_tol(M, cfg);
    out.ind_P = inertia_neg(P, cfg);
  }
  out.m = out.rank_M + out.ind_P;
  return out;
}

FocalCount focal_count_along(const FundamentalTrajectory& tr,
                             const SymplecticFamily& fam, Direction direction,
                             const ToleranceConfig& cfg) {
  FocalCount out;
  out.per_k.reserve(static_cast<size_t>(fam.N + 1));
  for (int k = 0; k <= fam.N; ++k) {
    const auto Yk = ConjoinedBasis::wrap(tr.basis(k));
    const auto Yk1 = ConjoinedBasis::wrap(tr.basis(k + 1));
    out.per_k.push_back(focal_multiplicity(
        Yk, Yk1, fam.coefficient(k, tr.lambda), direction, cfg));
    out.total += out.per_k.back().m;
  }
  return out;
}

FocalCount focal_count(const SymplecticFamily& fam, double lambda, int anchor,
                       Direction direction, const ToleranceConfig& cfg) {
  const FundamentalTrajectory tr = propagate(fam, lambda, anchor, cfg);
  return focal_count_along(tr, fam, direction, cfg);
}

}  // namespace symosc
