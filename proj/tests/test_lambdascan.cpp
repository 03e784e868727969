#include "symosc/lambdascan.hpp"

#include "symosc/compidx.hpp"
#include "symosc/systems.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace symosc;
using symosc_test::kPi;

namespace {
const ToleranceConfig cfg;                       // hint-driven paths
const ToleranceConfig scan_cfg = cfg.with_gap(0.05);  // generic detection

MatrixFamily scalar_family(std::function<double(double)> f,
                           std::string label = "") {
  MatrixFamily mf;
  mf.eval = [f](double lam) {
    Matrix A(1, 1);
    A << f(lam);
    return A;
  };
  mf.label = std::move(label);
  return mf;
}
}  // namespace

TEST_CASE("isolated dip of sin is found without hints") {
  const auto mf = scalar_family([](double x) { return std::sin(x); }, "sin");
  const auto events = scan_rank_jumps(mf, 1e-6, 1.5 * kPi, scan_cfg);
  REQUIRE(events.size() == 1);
  CHECK(events[0].lambda0 == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(events[0].left_rank == 1);
  CHECK(events[0].point_rank == 0);
  CHECK(events[0].multiplicity == 1);
}

TEST_CASE("constant families yield no events") {
  const auto c = scalar_family([](double) { return 2.5; });
  CHECK(scan_rank_jumps(c, -1.0, 1.0, scan_cfg).empty());
  const auto z = scalar_family([](double) { return 0.0; });
  CHECK(scan_rank_jumps(z, -1.0, 1.0, scan_cfg).empty());
}

TEST_CASE("endpoint membership of the half-open interval") {
  const auto mf = scalar_family([](double x) { return std::sin(x); });
  // jump exactly at the right endpoint is included
  auto at_b = scan_rank_jumps(mf, kPi / 2, kPi, scan_cfg);
  REQUIRE(at_b.size() == 1);
  CHECK(at_b[0].lambda0 == doctest::Approx(kPi));
  // jump exactly at the left endpoint is excluded
  auto at_a = scan_rank_jumps(mf, kPi, kPi + 0.5, scan_cfg);
  CHECK(at_a.empty());
  // hints behave the same way
  auto hinted = mf;
  hinted.hints = [](double, double) { return std::vector<double>{kPi}; };
  CHECK(scan_rank_jumps(hinted, kPi / 2, kPi, scan_cfg).size() == 1);
  CHECK(scan_rank_jumps(hinted, kPi, kPi + 0.5, scan_cfg).empty());
}

TEST_CASE("sustained rank change is localized by bisection") {
  // rank 2 left of 0.4, rank 1 at and right of it
  MatrixFamily mf;
  mf.eval = [](double lam) {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = std::max(0.4 - lam, 0.0);
    return A;
  };
  const auto events = scan_rank_jumps(mf, 0.0, 1.0, scan_cfg);
  REQUIRE(events.size() == 1);
  CHECK(events[0].lambda0 == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(events[0].left_rank == 2);
  CHECK(events[0].point_rank == 1);
}

TEST_CASE("rank increase is not an event") {
  MatrixFamily mf;
  mf.eval = [](double lam) {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = std::max(lam - 0.4, 0.0);
    return A;
  };
  CHECK(scan_rank_jumps(mf, 0.0, 1.0, scan_cfg).empty());
}

TEST_CASE("multiplicity two dip") {
  MatrixFamily mf;
  mf.eval = [](double lam) {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = std::sin(lam);
    A(1, 1) = 2.0 * std::sin(lam);
    return A;
  };
  const auto events = scan_rank_jumps(mf, 2.0, 4.0, scan_cfg);
  REQUIRE(events.size() == 1);
  CHECK(events[0].lambda0 == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(events[0].multiplicity == 2);
}

TEST_CASE("events violating the separation contract raise ResolutionError") {
  const auto mf = scalar_family(
      [](double x) { return std::sin(40.0 * x); });  // dips every pi/40
  CHECK_THROWS_AS(scan_rank_jumps(mf, 0.01, 0.5, cfg.with_gap(0.3)),
                  ResolutionError);
}

TEST_CASE("rank is constant between consecutive events") {
  const auto mf = scalar_family([](double x) { return std::sin(x); });
  const auto events = scan_rank_jumps(mf, 0.5, 3 * kPi - 0.2, scan_cfg);
  REQUIRE(events.size() == 2);
  const double mid = 0.5 * (events[0].lambda0 + events[1].lambda0);
  Matrix A(1, 1);
  A << std::sin(mid);
  CHECK(rank_tol(A, scan_cfg) == events[0].left_rank);
  for (const auto& ev : events) CHECK(ev.left_rank >= ev.point_rank + 1);
}

TEST_CASE("rotation family eigenvalue scan with and without hints") {
  const int N = 5;
  auto fam = trig_family(N);
  const double a = 1e-9, b = kPi;
  const auto hinted = finite_eigenvalues(fam, a, b, cfg);
  REQUIRE(hinted.size() == 6);
  for (int p = 1; p <= 6; ++p) {
    CHECK(hinted[static_cast<size_t>(p - 1)].lambda0 ==
          doctest::Approx(p * kPi / 6).epsilon(1e-9));
    CHECK(hinted[static_cast<size_t>(p - 1)].multiplicity == 1);
  }
  fam.eigenvalue_hints = nullptr;
  const auto generic = finite_eigenvalues(fam, a, b, scan_cfg);
  REQUIRE(generic.size() == hinted.size());
  for (size_t i = 0; i < generic.size(); ++i) {
    CHECK(generic[i].lambda0 ==
          doctest::Approx(hinted[i].lambda0).epsilon(1e-8));
    CHECK(generic[i].multiplicity == hinted[i].multiplicity);
  }
}

TEST_CASE("coupling-block jump sums of the rotation family") {
  const int N = 5;
  const auto fam = trig_family(N);
  // no multiple of pi inside ((N-1)pi/(N+1), N pi/(N+1)]
  CHECK(sum_b_jumps(fam, 4 * kPi / 6, 5 * kPi / 6, cfg).total == 0);
  // pi lies inside (N pi/(N+1), (N+2) pi/(N+1)] and every step drops by one
  CHECK(sum_b_jumps(fam, 5 * kPi / 6, 7 * kPi / 6, cfg).total == N + 1);

  // generic detection agrees on the second interval
  auto no_hints = fam;
  no_hints.b_jump_hints = nullptr;
  CHECK(sum_b_jumps(no_hints, 5 * kPi / 6, 7 * kPi / 6, scan_cfg).total == N + 1);
}

TEST_CASE("lambda-independent families have no jumps of any kind") {
  std::vector<Matrix> W(4, Matrix::Zero(2, 2));
  std::vector<Matrix> S;
  for (int k = 0; k < 4; ++k) S.push_back(random_symplectic(50 + k, 2));
  const auto fam = linear_family(W, S, cfg);
  CHECK(sum_b_jumps(fam, -1.0, 1.0, cfg).total == 0);
  CHECK(sum_relative_jumps(fam, -1.0, 1.0, cfg).total == 0);
}

TEST_CASE("anchored difference jumps vanish for Hamiltonian families") {
  const auto fam = random_hamiltonian_family(77, 2, 3);
  CHECK(sum_relative_jumps(fam, -0.6, 0.8, scan_cfg).total == 0);
}

TEST_CASE("anchored difference jumps of the rotation family") {
  const auto fam = trig_family(5);
  CHECK(sum_relative_jumps(fam, 4 * kPi / 6, 5 * kPi / 6, cfg).total == 0);
  // across a full period the difference returns to zero with a rank-2 drop
  const auto rep = sum_relative_jumps(fam, 0.4, 0.4 + 2 * kPi + 0.2, cfg);
  CHECK(rep.total == 2 * (fam.N + 1));
  for (int k = 0; k <= fam.N; ++k) {
    REQUIRE(rep.per_k[static_cast<size_t>(k)].size() == 1);
    CHECK(rep.per_k[static_cast<size_t>(k)][0].lambda0 ==
          doctest::Approx(0.4 + 2 * kPi).epsilon(1e-9));
    CHECK(rep.per_k[static_cast<size_t>(k)][0].multiplicity == 2);
  }
  // generic detection confirms the hinted event near the period return
  const double lam0 = 0.4 + 2 * kPi;
  MatrixFamily diff;
  diff.eval = [&fam](double lam) {
    return Matrix(fam.coefficient(0, 0.4) - fam.coefficient(0, lam));
  };
  const auto generic = scan_rank_jumps(diff, lam0 - 0.3, lam0 + 0.1, scan_cfg);
  REQUIRE(generic.size() == 1);
  // generic localization is honest to the threshold-crossing width
  CHECK(std::abs(generic[0].lambda0 - lam0) < 1e-6);
  CHECK(generic[0].multiplicity == 2);
}

TEST_CASE("path-against-reference jump sum identity") {
  // rho-sum minus the coupling jump sum equals the comparative-index
  // difference of the augmented pair at the two endpoints.
  for (int s = 0; s < 12; ++s) {
    const int n = 1 + s % 2;
    const auto fam = random_monotone_family(3000 + s, n, 1, 2);
    const double a = -0.7, b = 0.8;
    MatrixFamily path;
    path.eval = [&fam](double lam) { return fam.coefficient(0, lam); };
    path.label = "path";
    const Matrix What = random_symplectic(4000 + s, n);

    const long rho = sum_jumps_against(path, What, a, b, scan_cfg);
    MatrixFamily bpath;
    bpath.eval = [&fam, n](double lam) {
      return Matrix(fam.coefficient(0, lam).topRightCorner(n, n));
    };
    long theta = 0;
    for (const auto& ev : scan_rank_jumps(bpath, a, b, scan_cfg)) {
      theta += ev.multiplicity;
    }

    const auto aug_a =
        ConjoinedBasis::wrap(augment(fam.coefficient(0, a), scan_cfg));
    const auto aug_b =
        ConjoinedBasis::wrap(augment(fam.coefficient(0, b), scan_cfg));
    const auto aug_ref = ConjoinedBasis::wrap(augment(What, scan_cfg));
    const long rhs = comparative_index(aug_a, aug_ref, scan_cfg).mu -
                     comparative_index(aug_b, aug_ref, scan_cfg).mu;
    CAPTURE(s);
    CHECK(rho - theta == rhs);
  }
}

TEST_CASE("difference of anchored jump sums equals the endpoint rank") {
  for (int s = 0; s < 12; ++s) {
    const int n = 1 + s % 2;
    const auto fam = random_monotone_family(5000 + s, n, 1, 2);
    const double a = -0.6, b = 0.75;
    MatrixFamily path;
    path.eval = [&fam](double lam) { return fam.coefficient(0, lam); };
    const long rho_b = sum_jumps_against(path, fam.coefficient(0, b), a, b, scan_cfg);
    const long rho_a = sum_jumps_against(path, fam.coefficient(0, a), a, b, scan_cfg);
    const long rank_diff =
        rank_tol(Matrix(fam.coefficient(0, b) - fam.coefficient(0, a)), scan_cfg);
    CAPTURE(s);
    CHECK(rho_b - rho_a == rank_diff);
  }
}

TEST_CASE("monotone index jump on explicit families") {
  const auto lin = scalar_family([](double x) { return x; });
  CHECK(monotone_index_jump(lin, -1.0, 1.0, scan_cfg) == 1);
  long by_scan = 0;
  for (const auto& ev : scan_rank_jumps(lin, -1.0, 1.0, scan_cfg)) {
    by_scan += ev.multiplicity;
  }
  CHECK(by_scan == 1);

  const auto c = scalar_family([](double) { return 3.0; });
  CHECK(monotone_index_jump(c, -1.0, 1.0, scan_cfg) == 0);

  MatrixFamily two;
  two.eval = [](double lam) {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = lam - 1.0;
    A(1, 1) = lam + 1.0;
    return A;
  };
  CHECK(monotone_index_jump(two, -2.0, 2.0, scan_cfg) == 2);

  MatrixFamily decreasing;
  decreasing.eval = [](double lam) {
    Matrix A(1, 1);
    A << -lam;
    return A;
  };
  CHECK_THROWS_AS(monotone_index_jump(decreasing, -1.0, 1.0, scan_cfg),
                  ContractViolation);
}

TEST_CASE("randomized nondecreasing families: index jump equals scan sum") {
  for (int s = 0; s < 25; ++s) {
    const int n = 1 + s % 3;
    Matrix base(n, n);
    std::mt19937_64 gen(7000 + static_cast<std::uint64_t>(s));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        base(i, j) = 2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0;
    const Matrix Q0 = 0.5 * (base + base.transpose());
    const Matrix W = random_psd(7100 + s, n) + 0.4 * Matrix::Identity(n, n);
    MatrixFamily mf;
    mf.eval = [Q0, W](double lam) { return Matrix(Q0 + lam * W); };
    const long by_index = monotone_index_jump(mf, -2.5, 2.5, scan_cfg);
    long by_scan = 0;
    for (const auto& ev : scan_rank_jumps(mf, -2.5, 2.5, scan_cfg)) {
      by_scan += ev.multiplicity;
    }
    CAPTURE(s);
    CHECK(by_index == by_scan);
  }
}
