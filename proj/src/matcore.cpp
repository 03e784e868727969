#include "symosc/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace symosc {

void ToleranceConfig::validate() const {
  if (!(tol_rank > 0 && tol_eig > 0 && tol_symp > 0 && delta_probe > 0 &&
        lambda_min_gap > 0)) {
    throw ContractViolation("ToleranceConfig: all fields must be positive");
  }
  if (!(delta_probe < lambda_min_gap / 2)) {
    throw ContractViolation(
        "ToleranceConfig: delta_probe must be below lambda_min_gap / 2");
  }
}

ToleranceConfig ToleranceConfig::with_gap(double gap) const {
  ToleranceConfig out = *this;
  out.lambda_min_gap = gap;
  if (!(out.delta_probe < gap / 2)) out.delta_probe = gap / 16;
  out.validate();
  return out;
}

namespace {

void require_finite(const Matrix& A, const char* who) {
  if (!A.allFinite()) {
    throw ContractViolation(std::string(who) + ": input has NaN/Inf entries");
  }
}

}  // namespace

Matrix standard_skew(int two_n) {
  if (two_n <= 0 || two_n % 2 != 0) {
    throw ContractViolation("standard_skew: dimension must be positive even");
  }
  const int n = two_n / 2;
  Matrix J = Matrix::Zero(two_n, two_n);
  J.topRightCorner(n, n) = Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return J;
}

int rank_tol(const Matrix& A, const ToleranceConfig& cfg) {
  require_finite(A, "rank_tol");
  Eigen::JacobiSVD<Matrix> svd(A);
  if (svd.info() != Eigen::Success) {
    throw NumericFailure("rank_tol: SVD did not converge");
  }
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double thr = cfg.tol_rank * std::max(sv(0), 1.0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thr) ++r;
  }
  return r;
}

Matrix pinv(const Matrix& A, const ToleranceConfig& cfg) {
  require_finite(A, "pinv");
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericFailure("pinv: SVD did not converge");
  }
  const auto& sv = svd.singularValues();
  const double thr =
      sv.size() > 0 ? cfg.tol_rank * std::max(sv(0), 1.0) : cfg.tol_rank;
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thr) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Inertia inertia(const Matrix& A, const ToleranceConfig& cfg) {
  require_finite(A, "inertia");
  if (A.rows() != A.cols()) {
    throw ContractViolation("inertia: matrix must be square");
  }
  const double scale = A.size() > 0 ? A.cwiseAbs().maxCoeff() : 0.0;
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > cfg.tol_symp * std::max(scale, 1.0)) {
    throw ContractViolation("inertia: input asymmetry beyond tolerance");
  }
  const Matrix S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericFailure("inertia: eigenvalue decomposition failed");
  }
  const auto& ev = es.eigenvalues();
  const double emax = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
  const double band = cfg.tol_eig * std::max(emax, 1.0);
  Inertia out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -band) {
      ++out.negative;
    } else if (ev(i) > band) {
      ++out.positive;
    } else {
      ++out.zero;
    }
  }
  return out;
}

int inertia_neg(const Matrix& A, const ToleranceConfig& cfg) {
  return inertia(A, cfg).negative;
}

bool is_symplectic(const Matrix& S, const ToleranceConfig& cfg) {
  require_finite(S, "is_symplectic");
  if (S.rows() != S.cols() || S.rows() % 2 != 0 || S.rows() == 0) {
    throw ContractViolation("is_symplectic: matrix must be square of even size");
  }
  const Matrix J = standard_skew(static_cast<int>(S.rows()));
  const double resid = (S.transpose() * J * S - J).cwiseAbs().maxCoeff();
  const double scale = S.cwiseAbs().maxCoeff();
  return resid <= cfg.tol_symp * std::max(scale * scale, 1.0);
}

Matrix symplectic_inverse(const Matrix& S) {
  if (S.rows() != S.cols() || S.rows() % 2 != 0 || S.rows() == 0) {
    throw ContractViolation(
        "symplectic_inverse: matrix must be square of even size");
  }
  const Matrix J = standard_skew(static_cast<int>(S.rows()));
  return -J * S.transpose() * J;
}

}  // namespace symosc
