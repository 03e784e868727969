#include "symosc/matcore.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace symosc;
using symosc_test::mat2;

namespace {
const ToleranceConfig cfg;
}

TEST_CASE("rank_tol on exact cases") {
  CHECK(rank_tol(Matrix::Identity(3, 3), cfg) == 3);
  CHECK(rank_tol(Matrix::Zero(2, 2), cfg) == 0);
  CHECK(rank_tol(mat2(1, 2, 2, 4), cfg) == 1);  // second row is twice the first
}

TEST_CASE("rank_tol matches transpose") {
  std::mt19937_64 gen(7);
  auto u = [&] { return 2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0; };
  for (int t = 0; t < 50; ++t) {
    Matrix A(3, 5);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 5; ++j) A(i, j) = u();
    if (t % 3 == 0) A.row(2) = A.row(0) + A.row(1);
    CHECK(rank_tol(A, cfg) == rank_tol(Matrix(A.transpose()), cfg));
  }
}

TEST_CASE("rank_tol rejects non-finite input") {
  Matrix A = Matrix::Identity(2, 2);
  A(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(rank_tol(A, cfg), ContractViolation);
}

TEST_CASE("pinv basic values and Penrose identities") {
  CHECK((pinv(Matrix::Identity(3, 3), cfg) - Matrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  const Matrix Z = pinv(Matrix::Zero(2, 3), cfg);
  CHECK(Z.rows() == 3);
  CHECK(Z.cols() == 2);
  CHECK(Z.cwiseAbs().maxCoeff() == 0.0);

  const Matrix D = pinv(mat2(2, 0, 0, 0), cfg);
  CHECK((D - mat2(0.5, 0, 0, 0)).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 gen(11);
  auto u = [&] { return 2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0; };
  for (int t = 0; t < 40; ++t) {
    Matrix A(4, 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = u();
    if (t % 2 == 0) A.col(2) = A.col(0) - 0.5 * A.col(1);
    const Matrix P = pinv(A, cfg);
    const double tol = 10 * cfg.tol_rank;
    CHECK((A * P * A - A).cwiseAbs().maxCoeff() < tol);
    CHECK((P * A * P - P).cwiseAbs().maxCoeff() < tol);
    CHECK((A * P - (A * P).transpose()).cwiseAbs().maxCoeff() < tol);
    CHECK((P * A - (P * A).transpose()).cwiseAbs().maxCoeff() < tol);
    CHECK((pinv(P, cfg) - A).cwiseAbs().maxCoeff() < tol);
  }
}

TEST_CASE("inertia_neg on explicit spectra") {
  CHECK(inertia_neg(Matrix::Identity(4, 4), cfg) == 0);
  CHECK(inertia_neg(Matrix::Zero(3, 3), cfg) == 0);
  Matrix D = Matrix::Zero(3, 3);
  D.diagonal() << -1, -2, 3;
  CHECK(inertia_neg(D, cfg) == 2);
}

TEST_CASE("inertia_neg rejects asymmetric input") {
  CHECK_THROWS_AS(inertia_neg(mat2(0, 1, -1, 0), cfg), ContractViolation);
}

TEST_CASE("inertia partition covers the dimension") {
  std::mt19937_64 gen(13);
  auto u = [&] { return 2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0; };
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 4;
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = u();
    Matrix A = 0.5 * (M + M.transpose());
    if (t % 4 == 0) {
      // plant a kernel direction
      A.row(n - 1).setZero();
      A.col(n - 1).setZero();
    }
    const Inertia in = inertia(A, cfg);
    CHECK(in.negative + in.zero + in.positive == n);
    CHECK(in.negative == inertia_neg(A, cfg));
    CHECK(in.positive == inertia_neg(Matrix(-A), cfg));
  }
}

TEST_CASE("is_symplectic basics") {
  CHECK(is_symplectic(Matrix::Identity(2, 2), cfg));
  CHECK(is_symplectic(standard_skew(4), cfg));
  CHECK_FALSE(is_symplectic(mat2(2, 0, 0, 2), cfg));
  CHECK_THROWS_AS(is_symplectic(Matrix::Identity(3, 3), cfg), ContractViolation);
}

TEST_CASE("symplectic group closure and algebraic inverse") {
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 3;
    const Matrix S = random_symplectic(100 + t, n);
    const Matrix T = random_symplectic(200 + t, n);
    CHECK(is_symplectic(S, cfg));
    CHECK(is_symplectic(Matrix(S * T), cfg));
    const Matrix Sinv = symplectic_inverse(S);
    CHECK(is_symplectic(Sinv, cfg));
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    CHECK((Sinv * S - Matrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() <
          1e-10 * scale * scale);
  }
}

TEST_CASE("tolerance config validation") {
  ToleranceConfig bad;
  bad.delta_probe = bad.lambda_min_gap;  // violates the separation requirement
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  ToleranceConfig ok;
  CHECK_NOTHROW(ok.validate());
  const ToleranceConfig narrowed = ok.with_gap(1e-5);
  CHECK_NOTHROW(narrowed.validate());
}
