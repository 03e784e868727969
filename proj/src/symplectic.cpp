#include "symosc/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace symosc {

Matrix SymplecticFamily::coefficient(int k, double lambda) const {
  if (k < 0 || k > N) {
    throw ContractViolation("SymplecticFamily: index k out of [0, N]");
  }
  return eval(k, lambda);
}

Matrix SymplecticFamily::derivative(int k, double lambda) const {
  if (eval_deriv) return eval_deriv(k, lambda);
  const double h = 1e-6 * std::max(1.0, std::abs(lambda));
  return (eval(k, lambda + h) - eval(k, lambda - h)) / (2.0 * h);
}

Matrix SymplecticFamily::b_block(int k, double lambda) const {
  return coefficient(k, lambda).topRightCorner(n, n);
}

ConjoinedBasis ConjoinedBasis::make(Matrix Y, const ToleranceConfig& cfg) {
  if (Y.rows() != 2 * Y.cols() || Y.cols() == 0) {
    throw ContractViolation("ConjoinedBasis: matrix must be 2m x m");
  }
  const auto m = Y.cols();
  if (rank_tol(Y, cfg) != m) {
    throw ContractViolation("ConjoinedBasis: rank below full column rank");
  }
  const Matrix X = Y.topRows(m);
  const Matrix U = Y.bottomRows(m);
  const double scale = Y.cwiseAbs().maxCoeff();
  const double asym = (X.transpose() * U - U.transpose() * X).cwiseAbs().maxCoeff();
  if (asym > cfg.tol_symp * std::max(scale * scale, 1.0)) {
    throw ContractViolation("ConjoinedBasis: X^T U not symmetric");
  }
  return ConjoinedBasis(std::move(Y));
}

ConjoinedBasis ConjoinedBasis::wrap(Matrix Y) { return ConjoinedBasis(std::move(Y)); }

Matrix wronskian(const ConjoinedBasis& Y, const ConjoinedBasis& Yhat) {
  if (Y.mat().rows() != Yhat.mat().rows()) {
    throw ContractViolation("wronskian: dimension mismatch");
  }
  const Matrix J = standard_skew(static_cast<int>(Y.mat().rows()));
  return Y.mat().transpose() * J * Yhat.mat();
}

namespace {

Matrix lower_unit_pad(int n) {
  Matrix E = Matrix::Zero(2 * n, n);
  E.bottomRows(n) = Matrix::Identity(n, n);
  return E;
}

}  // namespace

Matrix FundamentalTrajectory::basis(int k) const {
  const int n = static_cast<int>(at(k).rows()) / 2;
  return at(k) * lower_unit_pad(n);
}

Matrix FundamentalTrajectory::inverse_basis(int k) const {
  const int n = static_cast<int>(at(k).rows()) / 2;
  return symplectic_inverse(at(k)) * lower_unit_pad(n);
}

FundamentalTrajectory propagate(const SymplecticFamily& fam, double lambda,
                                int anchor, const ToleranceConfig& cfg) {
  if (!std::isfinite(lambda)) {
    throw ContractViolation("propagate: lambda must be finite");
  }
  if (anchor != 0 && anchor != fam.N + 1) {
    throw ContractViolation("propagate: anchor must be 0 or N+1");
  }
  FundamentalTrajectory tr;
  tr.anchor = anchor;
  tr.lambda = lambda;
  tr.Z.assign(static_cast<size_t>(fam.N + 2), Matrix());
  const Matrix I = Matrix::Identity(2 * fam.n, 2 * fam.n);
  tr.Z[static_cast<size_t>(anchor)] = I;
  if (anchor == 0) {
    for (int k = 0; k <= fam.N; ++k) {
      const Matrix S = fam.coefficient(k, lambda);
      if (!is_symplectic(S, cfg)) {
        std::ostringstream os;
        os << "propagate: coefficient not symplectic at k=" << k
           << " lambda=" << lambda;
        throw ContractViolation(os.str());
      }
      tr.Z[static_cast<size_t>(k + 1)] = S * tr.Z[static_cast<size_t>(k)];
    }
  } else {
    for (int k = fam.N; k >= 0; --k) {
      const Matrix S = fam.coefficient(k, lambda);
      if (!is_symplectic(S, cfg)) {
        std::ostringstream os;
        os << "propagate: coefficient not symplectic at k=" << k
           << " lambda=" << lambda;
        throw ContractViolation(os.str());
      }
      tr.Z[static_cast<size_t>(k)] =
          symplectic_inverse(S) * tr.Z[static_cast<size_t>(k + 1)];
    }
  }
  return tr;
}

Matrix principal_slice_from_zero(const SymplecticFamily& fam, double lambda,
                                 int upto_k, const ToleranceConfig& cfg) {
  if (upto_k < 0 || upto_k > fam.N + 1) {
    throw ContractViolation("principal_slice_from_zero: k out of range");
  }
  Matrix Y = lower_unit_pad(fam.n);
  for (int k = 0; k < upto_k; ++k) {
    const Matrix S = fam.coefficient(k, lambda);
    if (!is_symplectic(S, cfg)) {
      throw ContractViolation(
          "principal_slice_from_zero: coefficient not symplectic");
    }
    Y = S * Y;
  }
  return Y;
}

MonotonicityForm monotonicity_form(const Matrix& S, const Matrix& Sdot,
                                   const ToleranceConfig& cfg) {
  if (!is_symplectic(S, cfg)) {
    throw ContractViolation("monotonicity_form: S not symplectic");
  }
  const Matrix J = standard_skew(static_cast<int>(S.rows()));
  const Matrix raw = J.transpose() * Sdot * symplectic_inverse(S);
  MonotonicityForm out;
  out.sym = 0.5 * (raw + raw.transpose());
  out.asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  return out;
}

MonotonicityReport certify_monotonicity(const SymplecticFamily& fam, double a,
                                        double b, int grid_points,
                                        const ToleranceConfig& cfg) {
  if (!(a < b) || grid_points < 2) {
    throw ContractViolation("certify_monotonicity: need a < b, grid_points >= 2");
  }
  MonotonicityReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int g = 0; g < grid_points; ++g) {
    const double lam = a + (b - a) * g / (grid_points - 1);
    for (int k = 0; k <= fam.N; ++k) {
      const MonotonicityForm mf =
          monotonicity_form(fam.coefficient(k, lam), fam.derivative(k, lam), cfg);
      if (mf.asymmetry > 100.0 * cfg.tol_symp) {
        std::ostringstream os;
        os << "monotonicity form asymmetry " << mf.asymmetry << " at k=" << k
           << " lambda=" << lam;
        rep.warnings.push_back(os.str());
      }
      rep.max_asymmetry = std::max(rep.max_asymmetry, mf.asymmetry);
      Eigen::SelfAdjointEigenSolver<Matrix> es(mf.sym, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) {
        throw NumericFailure("certify_monotonicity: eigensolver failed");
      }
      const double mn = es.eigenvalues().minCoeff();
      if (mn < rep.min_eigenvalue) {
        rep.min_eigenvalue = mn;
        rep.argmin_k = k;
        rep.argmin_lambda = lam;
      }
    }
  }
  rep.pass = rep.min_eigenvalue >= -cfg.tol_eig;
  return rep;
}

SymplecticFamily transform_family(const SymplecticFamily& fam,
                                  const std::vector<Matrix>& R,
                                  const ToleranceConfig& cfg) {
  if (static_cast<int>(R.size()) != fam.N + 2) {
    throw ContractViolation("transform_family: need R_0..R_{N+1}");
  }
  for (const Matrix& Rk : R) {
    if (Rk.rows() != 2 * fam.n || !is_symplectic(Rk, cfg)) {
      throw ContractViolation("transform_family: R_k must be symplectic 2n x 2n");
    }
  }
  auto Rinv = std::make_shared<std::vector<Matrix>>();
  auto Rcopy = std::make_shared<std::vector<Matrix>>(R);
  Rinv->reserve(R.size());
  for (const Matrix& Rk : R) Rinv->push_back(symplectic_inverse(Rk));

  SymplecticFamily out;
  out.n = fam.n;
  out.N = fam.N;
  auto base_eval = fam.eval;
  out.eval = [Rinv, Rcopy, base_eval](int k, double lam) -> Matrix {
    return (*Rinv)[static_cast<size_t>(k + 1)] * base_eval(k, lam) *
           (*Rcopy)[static_cast<size_t>(k)];
  };
  if (fam.eval_deriv) {
    auto base_deriv = fam.eval_deriv;
    out.eval_deriv = [Rinv, Rcopy, base_deriv](int k, double lam) -> Matrix {
      return (*Rinv)[static_cast<size_t>(k + 1)] * base_deriv(k, lam) *
             (*Rcopy)[static_cast<size_t>(k)];
    };
  }
  // Anchored difference ranks are unchanged by constant symplectic sandwiching.
  out.rel_jump_hints = fam.rel_jump_hints;
  out.label = fam.label.empty() ? "transformed" : fam.label + ":transformed";
  return out;
}

std::shared_ptr<const FundamentalTrajectory> TrajectoryCache::get(
    double lambda, int anchor) const {
  const auto key = std::make_pair(anchor, lambda);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto tr = std::make_shared<FundamentalTrajectory>(
      propagate(*fam_, lambda, anchor, cfg_));
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(key, tr);
  return tr;
}

}  // namespace symosc
