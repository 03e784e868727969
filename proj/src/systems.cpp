#include "symosc/systems.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <random>
#include <sstream>

namespace symosc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic uniforms; mt19937_64 output mapped to doubles directly so the
// stream does not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double unit() { return (gen_() >> 11) * 0x1.0p-53; }       // [0, 1)
  double sym() { return 2.0 * unit() - 1.0; }                // [-1, 1)
  int pick(int m) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(m)); }

 private:
  std::mt19937_64 gen_;
};

Matrix random_psd_from(Rng& rng, int n, double scale) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = rng.sym();
  }
  Matrix P = M.transpose() * M;
  P = 0.5 * (P + P.transpose());
  const double nrm = P.norm();
  if (nrm > 1e-12) P *= scale / nrm;
  return P;
}

// Shear factor [[I, 0], [-t W, I]] (lower) or [[I, t V], [0, I]] (upper).
Matrix shear(const Matrix& P, double t, bool lower) {
  const int n = static_cast<int>(P.rows());
  Matrix L = Matrix::Identity(2 * n, 2 * n);
  if (lower) {
    L.bottomLeftCorner(n, n) = -t * P;
  } else {
    L.topRightCorner(n, n) = t * P;
  }
  return L;
}

Matrix random_symplectic_from(Rng& rng, int n) {
  const Matrix J = standard_skew(2 * n);
  Matrix G = Matrix::Identity(2 * n, 2 * n);
  const int pieces = 2 + rng.pick(2);
  for (int p = 0; p < pieces; ++p) {
    const Matrix P = random_psd_from(rng, n, 0.7);
    G = G * shear(P, 0.9 * rng.sym(), rng.pick(2) == 0);
    const int jp = rng.pick(4);
    for (int q = 0; q < jp; ++q) G = G * J;
  }
  return G;
}

// Multiples of `period` shifted by `offset` that can fall inside (a, b]; the
// scanner applies the exact half-open membership test itself.
std::vector<double> lattice_hints(double offset, double period, double a,
                                  double b) {
  std::vector<double> out;
  const auto l0 = static_cast<long long>(std::floor((a - offset) / period)) - 1;
  for (long long l = l0;; ++l) {
    const double x = offset + static_cast<double>(l) * period;
    if (x > b + period) break;
    out.push_back(x);
  }
  return out;
}

}  // namespace

Matrix random_symplectic(std::uint64_t seed, int n) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  return random_symplectic_from(rng, n);
}

Matrix random_psd(std::uint64_t seed, int n) {
  Rng rng(seed * 0xd1342543de82ef95ULL + 0x5851f42d4c957f2dULL);
  return random_psd_from(rng, n, 1.0);
}

SymplecticFamily trig_family(int N) {
  if (N < 1) throw ContractViolation("trig_family: N must be >= 1");
  SymplecticFamily fam;
  fam.n = 1;
  fam.N = N;
  fam.label = "trig";
  fam.eval = [](int, double lam) {
    Matrix S(2, 2);
    S << std::cos(lam), std::sin(lam), -std::sin(lam), std::cos(lam);
    return S;
  };
  fam.eval_deriv = [](int, double lam) {
    Matrix D(2, 2);
    D << -std::sin(lam), std::cos(lam), -std::cos(lam), -std::sin(lam);
    return D;
  };
  // sin(lambda) loses rank exactly at the multiples of pi.
  fam.b_jump_hints = [](int, double a, double b) {
    return lattice_hints(0.0, kPi, a, b);
  };
  // X at the right endpoint is sin((N+1) lambda).
  fam.eigenvalue_hints = [N](double a, double b) {
    return lattice_hints(0.0, kPi / (N + 1), a, b);
  };
  // S(anchor) - S(lambda) vanishes (rank 0) only at anchor + 2 pi l.
  fam.rel_jump_hints = [](int, double a, double b) {
    return lattice_hints(a, 2.0 * kPi, a, b);
  };
  // Every fundamental-matrix transform of a rotation family is again a
  // rotation family; its B block is sin(lambda - beta).
  fam.renorm_b_hints = [](int, double beta, double a, double b) {
    return lattice_hints(beta, kPi, a, b);
  };
  return fam;
}

SymplecticFamily linear_family(const std::vector<Matrix>& W,
                               const std::vector<Matrix>& S,
                               const ToleranceConfig& cfg) {
  if (W.empty() || W.size() != S.size()) {
    throw ContractViolation("linear_family: need one W_k per S_k");
  }
  const int n = static_cast<int>(W[0].rows());
  for (const Matrix& Wk : W) {
    if (Wk.rows() != n || Wk.cols() != n) {
      throw ContractViolation("linear_family: W_k must be n x n");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Wk + Wk.transpose()),
                                             Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, Wk.cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -cfg.tol_eig * scale) {
      throw ContractViolation("linear_family: W_k not positive semidefinite");
    }
  }
  for (const Matrix& Sk : S) {
    if (Sk.rows() != 2 * n || !is_symplectic(Sk, cfg)) {
      throw ContractViolation("linear_family: S_k not symplectic 2n x 2n");
    }
  }
  auto Wv = std::make_shared<std::vector<Matrix>>(W);
  auto Sv = std::make_shared<std::vector<Matrix>>(S);
  SymplecticFamily fam;
  fam.n = n;
  fam.N = static_cast<int>(W.size()) - 1;
  fam.label = "linear";
  fam.eval = [Wv, Sv, n](int k, double lam) {
    return Matrix(shear((*Wv)[static_cast<size_t>(k)], lam, true) *
                  (*Sv)[static_cast<size_t>(k)]);
  };
  fam.eval_deriv = [Wv, Sv, n](int k, double lam) {
    (void)lam;
    Matrix D = Matrix::Zero(2 * n, 2 * n);
    D.bottomLeftCorner(n, n) = -(*Wv)[static_cast<size_t>(k)];
    return Matrix(D * (*Sv)[static_cast<size_t>(k)]);
  };
  // The B block of the coefficient matrix does not depend on lambda, and the
  // anchored difference has constant rank rank(W_k) away from the anchor.
  fam.b_jump_hints = [](int, double, double) { return std::vector<double>{}; };
  fam.rel_jump_hints = [](int, double, double) { return std::vector<double>{}; };
  return fam;
}

SymplecticFamily hamiltonian_family(int n, int N,
                                    std::function<Matrix(int, double)> Amap,
                                    std::function<Matrix(int, double)> Bmap,
                                    std::function<Matrix(int, double)> Cmap) {
  if (n < 1 || N < 1) throw ContractViolation("hamiltonian_family: n, N >= 1");
  SymplecticFamily fam;
  fam.n = n;
  fam.N = N;
  fam.label = "hamiltonian";
  fam.eval = [n, Amap, Bmap, Cmap](int k, double lam) {
    const Matrix A = Amap(k, lam);
    const Matrix B = Bmap(k, lam);
    const Matrix C = Cmap(k, lam);
    const Matrix IA = Matrix::Identity(n, n) - A;
    Eigen::FullPivLU<Matrix> lu(IA);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "hamiltonian_family: I - A singular at k=" << k << " lambda=" << lam;
      throw ContractViolation(os.str());
    }
    const Matrix E = lu.inverse();
    Matrix S(2 * n, 2 * n);
    S.topLeftCorner(n, n) = E;
    S.topRightCorner(n, n) = E * B;
    S.bottomLeftCorner(n, n) = C * E;
    S.bottomRightCorner(n, n) =
        C * E * B + Matrix::Identity(n, n) - A.transpose();
    return S;
  };
  return fam;
}

SymplecticFamily random_monotone_family(std::uint64_t seed, int n, int N,
                                        int factors) {
  if (n < 1 || N < 1 || factors < 1) {
    throw ContractViolation("random_monotone_family: n, N, factors >= 1");
  }
  // Factor chain per k: G_m, (P_m, lower_m), ..., (P_1, lower_1), G_0.
  struct Chain {
    std::vector<Matrix> G;      // size factors + 1
    std::vector<Matrix> P;      // size factors, PSD
    std::vector<char> lower;    // orientation per shear
  };
  auto chains = std::make_shared<std::vector<Chain>>();
  Rng rng(seed * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
  for (int k = 0; k <= N; ++k) {
    Chain c;
    for (int j = 0; j <= factors; ++j) c.G.push_back(random_symplectic_from(rng, n));
    for (int j = 0; j < factors; ++j) {
      c.P.push_back(random_psd_from(rng, n, 0.8));
      c.lower.push_back(static_cast<char>(rng.pick(2)));
    }
    chains->push_back(std::move(c));
  }
  SymplecticFamily fam;
  fam.n = n;
  fam.N = N;
  fam.label = "random:" + std::to_string(seed);
  fam.eval = [chains, factors](int k, double lam) {
    const Chain& c = (*chains)[static_cast<size_t>(k)];
    Matrix S = c.G[static_cast<size_t>(factors)];
    for (int j = factors - 1; j >= 0; --j) {
      S = S * shear(c.P[static_cast<size_t>(j)], lam, c.lower[static_cast<size_t>(j)] != 0);
      S = S * c.G[static_cast<size_t>(j)];
    }
    return S;
  };
  fam.eval_deriv = [chains, factors](int k, double lam) {
    const Chain& c = (*chains)[static_cast<size_t>(k)];
    const int n2 = static_cast<int>(c.G[0].rows());
    Matrix total = Matrix::Zero(n2, n2);
    for (int d = 0; d < factors; ++d) {
      Matrix term = c.G[static_cast<size_t>(factors)];
      for (int j = factors - 1; j >= 0; --j) {
        if (j == d) {
          term = term * (shear(c.P[static_cast<size_t>(j)], 1.0,
                               c.lower[static_cast<size_t>(j)] != 0) -
                         Matrix::Identity(n2, n2));
        } else {
          term = term * shear(c.P[static_cast<size_t>(j)], lam,
                              c.lower[static_cast<size_t>(j)] != 0);
        }
        term = term * c.G[static_cast<size_t>(j)];
      }
      total += term;
    }
    return total;
  };
  return fam;
}

SymplecticFamily random_hamiltonian_family(std::uint64_t seed, int n, int N) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 0xbf58476d1ce4e5b9ULL);
  auto H0 = std::make_shared<std::vector<Matrix>>();
  auto H1 = std::make_shared<std::vector<Matrix>>();
  for (int k = 0; k <= N; ++k) {
    Matrix M(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i) {
      for (int j = 0; j < 2 * n; ++j) M(i, j) = rng.sym();
    }
    Matrix A0 = 0.5 * (M + M.transpose());
    A0 *= 0.35 / std::max(1.0, A0.norm());
    H0->push_back(A0);
    Matrix A1 = random_psd_from(rng, 2 * n, 0.45);
    H1->push_back(A1);
  }
  auto block = [n](const Matrix& H, int bi, int bj) {
    return Matrix(H.block(bi * n, bj * n, n, n));
  };
  return hamiltonian_family(
      n, N,
      [H0, H1, block](int k, double lam) {
        return Matrix(block((*H0)[static_cast<size_t>(k)], 1, 0) +
                      lam * block((*H1)[static_cast<size_t>(k)], 1, 0));
      },
      [H0, H1, block](int k, double lam) {
        return Matrix(block((*H0)[static_cast<size_t>(k)], 1, 1) +
                      lam * block((*H1)[static_cast<size_t>(k)], 1, 1));
      },
      [H0, H1, block](int k, double lam) {
        return Matrix(-(block((*H0)[static_cast<size_t>(k)], 0, 0) +
                        lam * block((*H1)[static_cast<size_t>(k)], 0, 0)));
      });
}

SymplecticFamily build_family(const FamilySpec& spec,
                              const ToleranceConfig& cfg) {
  if (spec.kind == "trig") return trig_family(spec.N);
  if (spec.kind == "random") {
    return random_monotone_family(spec.seed, spec.n, spec.N, spec.factors);
  }
  if (spec.kind == "hamiltonian") {
    return random_hamiltonian_family(spec.seed, spec.n, spec.N);
  }
  if (spec.kind == "linear") {
    std::vector<Matrix> W, S;
    for (int k = 0; k <= spec.N; ++k) {
      W.push_back(random_psd(spec.seed * 1000 + static_cast<std::uint64_t>(k),
                             spec.n));
      S.push_back(random_symplectic(
          spec.seed * 1000 + 500 + static_cast<std::uint64_t>(k), spec.n));
    }
    return linear_family(W, S, cfg);
  }
  throw ContractViolation("build_family: unknown kind '" + spec.kind + "'");
}

}  // namespace symosc
