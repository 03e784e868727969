#pragma once

#include "symosc/symplectic.hpp"

#include <cstdint>

namespace symosc {

/// Rotation-coefficient system of block size 1: S_k(lambda) =
/// [[cos, sin], [-sin, cos]].  Ships exhaustive analytic jump hints.
SymplecticFamily trig_family(int N);

/// S_k(lambda) = [[I, 0], [-lambda W_k, I]] S_k for PSD W_k and constant
/// symplectic S_k; the monotonicity form is diag(W_k, 0) identically.
SymplecticFamily linear_family(const std::vector<Matrix>& W,
                               const std::vector<Matrix>& S,
                               const ToleranceConfig& cfg);

/// Coefficient matrix of the discrete Hamiltonian system with blocks
/// A_k(lambda), B_k(lambda), C_k(lambda); requires I - A_k(lambda) invertible
/// wherever evaluated.
SymplecticFamily hamiltonian_family(
    int n, int N, std::function<Matrix(int, double)> Amap,
    std::function<Matrix(int, double)> Bmap,
    std::function<Matrix(int, double)> Cmap);

/// Seeded monotone family S_k(lambda) = G_{k,m} L_m(lambda) ... L_1(lambda)
/// G_{k,0} built from random constant symplectic factors and random PSD
/// shear factors; the monotonicity form is nonnegative by construction and
/// the analytic derivative is supplied.  Deterministic per seed.
SymplecticFamily random_monotone_family(std::uint64_t seed, int n, int N,
                                        int factors);

/// Seeded affine Hamiltonian H_k(lambda) = H0_k + lambda H1_k with H1_k PSD
/// and I - A_k(lambda) kept invertible on moderate intervals.
SymplecticFamily random_hamiltonian_family(std::uint64_t seed, int n, int N);

/// Random constant symplectic matrix (product of shear factors and skew
/// powers; exactly in the group up to rounding).  Deterministic per seed.
Matrix random_symplectic(std::uint64_t seed, int n);

/// Random PSD matrix M^T M with entries uniform in [-1, 1], scaled to unit
/// spectral-norm order.  Deterministic per seed.
Matrix random_psd(std::uint64_t seed, int n);

/// Config-file payload selecting a built-in family.
struct FamilySpec {
  std::string kind;  // trig | linear | hamiltonian | random
  int n = 1;
  int N = 5;
  std::uint64_t seed = 1;
  int factors = 1;  // random kind only
};
SymplecticFamily build_family(const FamilySpec& spec,
                              const ToleranceConfig& cfg);

}  // namespace symosc
