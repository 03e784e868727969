#include "symosc/lambdascan.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace symosc {

namespace {

struct SigmaProbe {
  Vector sv;  // singular values, descending
  int rank = 0;
};

SigmaProbe probe(const MatrixFamily& fam, double lam,
                 const ToleranceConfig& cfg) {
  const Matrix A = fam.eval(lam);
  if (!A.allFinite()) {
    throw NumericFailure("scan_rank_jumps: family evaluation not finite");
  }
  Eigen::JacobiSVD<Matrix> svd(A);
  if (svd.info() != Eigen::Success) {
    throw NumericFailure("scan_rank_jumps: SVD failed during scan");
  }
  SigmaProbe p;
  p.sv = svd.singularValues();
  const double thr =
      p.sv.size() > 0 ? cfg.tol_rank * std::max(p.sv(0), 1.0) : cfg.tol_rank;
  for (Eigen::Index i = 0; i < p.sv.size(); ++i) {
    if (p.sv(i) > thr) ++p.rank;
  }
  return p;
}

double kept_sigma(const SigmaProbe& p, int r) {
  return r >= 1 && r <= p.sv.size() ? p.sv(r - 1) : 0.0;
}

double rank_threshold(const SigmaProbe& p, const ToleranceConfig& cfg) {
  const double smax = p.sv.size() > 0 ? p.sv(0) : 0.0;
  return cfg.tol_rank * std::max(smax, 1.0);
}

// Locate the right edge of the rank plateau starting at lo; rank(hi) differs.
double bisect_transition(const MatrixFamily& fam, double lo, double hi,
                         int rank_lo, const ToleranceConfig& cfg) {
  for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (probe(fam, mid, cfg).rank == rank_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// Golden-section minimization of the r-th singular value on [lo, hi].
double golden_min_sigma(const MatrixFamily& fam, double lo, double hi, int r,
                        const ToleranceConfig& cfg) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = kept_sigma(probe(fam, x1, cfg), r);
  double f2 = kept_sigma(probe(fam, x2, cfg), r);
  for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi));
       ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = kept_sigma(probe(fam, x1, cfg), r);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = kept_sigma(probe(fam, x2, cfg), r);
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<JumpEvent> event_at(const MatrixFamily& fam, double lam,
                                  const ToleranceConfig& cfg) {
  // The exact rank is constant on (lam - lambda_min_gap, lam), but close to a
  // point where the family vanishes entirely the scaled threshold can hide
  // slow directions.  Probing several distances inside the plateau and taking
  // the largest rank restores the left limit.
  int left = 0;
  for (double d = cfg.delta_probe; d < 0.5 * cfg.lambda_min_gap; d *= 16.0) {
    left = std::max(left, probe(fam, lam - d, cfg).rank);
  }
  const int at = probe(fam, lam, cfg).rank;
  if (left <= at) return std::nullopt;
  JumpEvent ev;
  ev.lambda0 = lam;
  ev.left_rank = left;
  ev.point_rank = at;
  ev.multiplicity = left - at;
  return ev;
}

}  // namespace

std::vector<JumpEvent> scan_rank_jumps(const MatrixFamily& fam, double a,
                                       double b, const ToleranceConfig& cfg) {
  cfg.validate();
  if (!(a < b)) throw ContractViolation("scan_rank_jumps: need a < b");
  const double snap = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});

  std::vector<JumpEvent> events;
  if (fam.hints) {
    for (double h : fam.hints(a, b)) {
      if (!(h > a + snap) || !(h <= b + snap)) continue;
      if (auto ev = event_at(fam, std::min(h, b), cfg)) events.push_back(*ev);
    }
  } else {
    const double step = cfg.lambda_min_gap / 4.0;
    const int ncells = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
    std::vector<double> grid(static_cast<size_t>(ncells) + 1);
    std::vector<SigmaProbe> gp(grid.size());
    for (int i = 0; i <= ncells; ++i) {
      grid[static_cast<size_t>(i)] = a + (b - a) * i / ncells;
      gp[static_cast<size_t>(i)] = probe(fam, grid[static_cast<size_t>(i)], cfg);
    }
    for (int i = 0; i < ncells; ++i) {
      const double x0 = grid[static_cast<size_t>(i)];
      const double x1 = grid[static_cast<size_t>(i) + 1];
      const SigmaProbe& p0 = gp[static_cast<size_t>(i)];
      const SigmaProbe& p1 = gp[static_cast<size_t>(i) + 1];
      if (p0.rank != p1.rank) {
        const double t = bisect_transition(fam, x0, x1, p0.rank, cfg);
        if (auto ev = event_at(fam, t, cfg)) events.push_back(*ev);
        continue;
      }
      const int r = p0.rank;
      if (r == 0) continue;
      // Isolated dip: the r-th singular value touching zero inside the cell
      // while staying well clear of it at both cell ends.
      if (kept_sigma(p0, r) <= 10.0 * rank_threshold(p0, cfg) ||
          kept_sigma(p1, r) <= 10.0 * rank_threshold(p1, cfg)) {
        continue;
      }
      // Coarse interior probe guards against several local minima per cell.
      double best_x = x0, best_f = kept_sigma(p0, r);
      const int sub = 6;
      for (int j = 1; j < sub; ++j) {
        const double x = x0 + (x1 - x0) * j / sub;
        const double f = kept_sigma(probe(fam, x, cfg), r);
        if (f < best_f) {
          best_f = f;
          best_x = x;
        }
      }
      const double lo = std::max(x0, best_x - (x1 - x0) / sub);
      const double hi = std::min(x1, best_x + (x1 - x0) / sub);
      const double xm = golden_min_sigma(fam, lo, hi, r, cfg);
      const SigmaProbe pm = probe(fam, xm, cfg);
      if (kept_sigma(pm, r) < rank_threshold(pm, cfg)) {
        if (auto ev = event_at(fam, xm, cfg)) events.push_back(*ev);
      }
    }
    // Right endpoint: a drop exactly at b is part of the half-open interval.
    if (auto ev = event_at(fam, b, cfg)) events.push_back(*ev);
  }

  std::sort(events.begin(), events.end(),
            [](const JumpEvent& x, const JumpEvent& y) {
              return x.lambda0 < y.lambda0;
            });
  // Generic detections whose left probe would land below a are artifacts of
  // the threshold floor near a vanishing family; hinted locations are taken
  // on the caller's authority down to the snap width.
  const double left_margin = fam.hints ? snap : cfg.delta_probe;
  // The separation contract allows one genuine jump per gap window, so two
  // detections inside half a window are either the same jump seen twice (a
  // dip straddling a cell boundary, or the staircase a multi-order zero
  // paints across the threshold floor) or a contract violation.  The first
  // case shows up as the later event subsuming the earlier drop.
  std::vector<JumpEvent> out;
  for (const JumpEvent& ev : events) {
    if (ev.lambda0 <= a + left_margin) continue;
    if (!out.empty() &&
        ev.lambda0 - out.back().lambda0 < 0.5 * cfg.lambda_min_gap) {
      const double mid = 0.5 * (ev.lambda0 + out.back().lambda0);
      if (ev.left_rank >= out.back().left_rank &&
          ev.point_rank <= out.back().point_rank &&
          probe(fam, mid, cfg).rank <= out.back().point_rank) {
        out.back() = ev;
        continue;
      }
      std::ostringstream os;
      os << "scan_rank_jumps: events at " << out.back().lambda0 << " and "
         << ev.lambda0 << " closer than lambda_min_gap"
         << (fam.label.empty() ? "" : (" in " + fam.label));
      throw ResolutionError(os.str());
    }
    out.push_back(ev);
  }
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i].lambda0 - out[i - 1].lambda0 < cfg.lambda_min_gap) {
      std::ostringstream os;
      os << "scan_rank_jumps: events at " << out[i - 1].lambda0 << " and "
         << out[i].lambda0 << " closer than lambda_min_gap"
         << (fam.label.empty() ? "" : (" in " + fam.label));
      throw ResolutionError(os.str());
    }
  }
  return out;
}

FamilyJumpReport sum_b_jumps(const SymplecticFamily& fam, double a, double b,
                             const ToleranceConfig& cfg) {
  FamilyJumpReport rep;
  rep.per_k.resize(static_cast<size_t>(fam.N + 1));
  for (int k = 0; k <= fam.N; ++k) {
    MatrixFamily mf;
    mf.eval = [&fam, k](double lam) { return fam.b_block(k, lam); };
    if (fam.b_jump_hints) {
      mf.hints = [&fam, k](double lo, double hi) {
        return fam.b_jump_hints(k, lo, hi);
      };
    }
    mf.label = fam.label + ":B[k=" + std::to_string(k) + "]";
    rep.per_k[static_cast<size_t>(k)] = scan_rank_jumps(mf, a, b, cfg);
    for (const auto& ev : rep.per_k[static_cast<size_t>(k)]) {
      rep.total += ev.multiplicity;
    }
  }
  return rep;
}

std::vector<JumpEvent> finite_eigenvalues(const SymplecticFamily& fam,
                                          double a, double b,
                                          const ToleranceConfig& cfg) {
  MatrixFamily mf;
  mf.eval = [&fam, &cfg](double lam) {
    return Matrix(principal_slice_from_zero(fam, lam, fam.N + 1, cfg)
                      .topRows(fam.n));
  };
  mf.hints = fam.eigenvalue_hints;
  mf.label = fam.label + ":X[N+1]";
  return scan_rank_jumps(mf, a, b, cfg);
}

FamilyJumpReport sum_relative_jumps(const SymplecticFamily& fam, double a,
                                    double b, const ToleranceConfig& cfg) {
  FamilyJumpReport rep;
  rep.per_k.resize(static_cast<size_t>(fam.N + 1));
  for (int k = 0; k <= fam.N; ++k) {
    const Matrix Sa = fam.coefficient(k, a);
    MatrixFamily mf;
    mf.eval = [&fam, k, Sa](double lam) {
      return Matrix(Sa - fam.coefficient(k, lam));
    };
    if (fam.rel_jump_hints) {
      mf.hints = [&fam, k](double lo, double hi) {
        return fam.rel_jump_hints(k, lo, hi);
      };
    }
    mf.label = fam.label + ":rel[k=" + std::to_string(k) + "]";
    rep.per_k[static_cast<size_t>(k)] = scan_rank_jumps(mf, a, b, cfg);
    for (const auto& ev : rep.per_k[static_cast<size_t>(k)]) {
      rep.total += ev.multiplicity;
    }
  }
  return rep;
}

long sum_jumps_against(const MatrixFamily& path, const Matrix& ref, double a,
                       double b, const ToleranceConfig& cfg) {
  MatrixFamily mf;
  mf.eval = [&path, &ref](double lam) { return Matrix(ref - path.eval(lam)); };
  mf.hints = path.hints;
  mf.label = path.label + ":against-ref";
  long total = 0;
  for (const auto& ev : scan_rank_jumps(mf, a, b, cfg)) {
    total += ev.multiplicity;
  }
  return total;
}

long monotone_index_jump(const MatrixFamily& Q, double a, double b,
                         const ToleranceConfig& cfg) {
  if (!(a < b)) throw ContractViolation("monotone_index_jump: need a < b");
  const int samples = 9;
  const double h = (b - a) / 256.0;
  for (int i = 0; i < samples; ++i) {
    const double lam = a + (b - a) * i / (samples - 1.0);
    const Matrix Q0 = Q.eval(lam);
    if ((Q0 - Q0.transpose()).cwiseAbs().maxCoeff() >
        cfg.tol_symp * std::max(1.0, Q0.cwiseAbs().maxCoeff())) {
      throw ContractViolation("monotone_index_jump: family not symmetric");
    }
    const double x0 = std::max(a, lam - h);
    const double x1 = std::min(b, lam + h);
    const Matrix D = (Q.eval(x1) - Q.eval(x0)) / (x1 - x0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (D + D.transpose()),
                                             Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e3 * cfg.tol_eig * scale) {
      throw ContractViolation(
          "monotone_index_jump: sampled derivative not nonnegative");
    }
  }
  return inertia_neg(Q.eval(a), cfg) - inertia_neg(Q.eval(b), cfg);
}

}  // namespace symosc
