#include "symosc/selftest.hpp"

#include "symosc/compidx.hpp"
#include "symosc/focal.hpp"
#include "symosc/lambdascan.hpp"
#include "symosc/osccount.hpp"
#include "symosc/report_io.hpp"
#include "symosc/systems.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace symosc {

namespace {

constexpr double kPi = 3.14159265358979323846;

class Check {
 public:
  Check(std::vector<SelftestResult>& out, std::string name)
      : out_(out), name_(std::move(name)) {}

  void run(const std::function<void(std::ostringstream&)>& body) {
    SelftestResult r;
    r.name = name_;
    std::ostringstream detail;
    try {
      body(detail);
      r.pass = detail.str().empty();
      r.detail = detail.str();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    out_.push_back(std::move(r));
  }

 private:
  std::vector<SelftestResult>& out_;
  std::string name_;
};

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
}

}  // namespace

std::vector<SelftestResult> run_selftest(const ToleranceConfig& cfg,
                                         std::uint64_t base_seed) {
  std::vector<SelftestResult> results;
  const ToleranceConfig scan_cfg = cfg.with_gap(0.05);

  Check(results, "matcore.rank-and-pinv").run([&](std::ostringstream& bad) {
    Matrix A(2, 2);
    A << 1, 2, 2, 4;
    if (rank_tol(A, cfg) != 1) bad << "dependent rows rank != 1";
    std::mt19937_64 gen(base_seed + 1);
    for (int t = 0; t < 20; ++t) {
      Matrix M(3, 4);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) M(i, j) = uniform(gen, -2, 2);
      if (rank_tol(M, cfg) != rank_tol(Matrix(M.transpose()), cfg)) {
        bad << "rank(A) != rank(A^T)";
        break;
      }
      const Matrix P = pinv(M, cfg);
      if ((M * P * M - M).cwiseAbs().maxCoeff() > 10 * cfg.tol_rank ||
          (pinv(P, cfg) - M).cwiseAbs().maxCoeff() > 10 * cfg.tol_rank) {
        bad << "pinv identities violated";
        break;
      }
    }
  });

  Check(results, "matcore.inertia-partition").run([&](std::ostringstream& bad) {
    std::mt19937_64 gen(base_seed + 2);
    for (int t = 0; t < 20; ++t) {
      Matrix M(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) M(i, j) = uniform(gen, -2, 2);
      const Matrix A = 0.5 * (M + M.transpose());
      const Inertia in = inertia(A, cfg);
      if (in.negative + in.zero + in.positive != 4 ||
          in.negative != inertia_neg(A, cfg) ||
          in.positive != inertia_neg(Matrix(-A), cfg)) {
        bad << "inertia partition broken";
        break;
      }
    }
  });

  Check(results, "matcore.symplectic-group").run([&](std::ostringstream& bad) {
    for (int t = 0; t < 20; ++t) {
      const int n = 1 + t % 3;
      const Matrix S = random_symplectic(base_seed + 100 + t, n);
      const Matrix T = random_symplectic(base_seed + 200 + t, n);
      if (!is_symplectic(S, cfg) || !is_symplectic(Matrix(S * T), cfg) ||
          !is_symplectic(symplectic_inverse(S), cfg)) {
        bad << "group closure failed at trial " << t;
        break;
      }
      if ((symplectic_inverse(S) * S - Matrix::Identity(2 * n, 2 * n))
              .cwiseAbs()
              .maxCoeff() > 1e-9 * std::max(1.0, S.squaredNorm())) {
        bad << "algebraic inverse inaccurate at trial " << t;
        break;
      }
    }
  });

  Check(results, "symplectic.propagation").run([&](std::ostringstream& bad) {
    const SymplecticFamily fam = random_monotone_family(base_seed + 3, 2, 4, 1);
    const FundamentalTrajectory tr = propagate(fam, 0.37, 0, cfg);
    for (int k = 0; k <= fam.N + 1; ++k) {
      if (!is_symplectic(tr.at(k), cfg)) bad << "Z_" << k << " not symplectic";
    }
    const FundamentalTrajectory bw = propagate(fam, 0.37, fam.N + 1, cfg);
    Matrix w0;
    for (int k = 0; k <= fam.N + 1; ++k) {
      const Matrix w = wronskian(ConjoinedBasis::wrap(tr.basis(k)),
                                 ConjoinedBasis::wrap(bw.basis(k)));
      if (k == 0) {
        w0 = w;
      } else if ((w - w0).cwiseAbs().maxCoeff() > 1e-8) {
        bad << "Wronskian drifts at k=" << k;
      }
    }
  });

  Check(results, "symplectic.monotonicity-certificates")
      .run([&](std::ostringstream& bad) {
        const auto trig = trig_family(5);
        const auto r1 = certify_monotonicity(trig, 0.2, 2.8, 9, cfg);
        if (!r1.pass || std::abs(r1.min_eigenvalue - 1.0) > 1e-6) {
          bad << "rotation family certificate wrong";
        }
        for (int s = 0; s < 10; ++s) {
          const auto fam =
              random_monotone_family(base_seed + 300 + s, 1 + s % 3, 3, 1);
          if (!certify_monotonicity(fam, -1.0, 1.0, 7, cfg).pass) {
            bad << "random family certificate failed at seed offset " << s;
            break;
          }
        }
      });

  Check(results, "compidx.wronskian-rank-identity")
      .run([&](std::ostringstream& bad) {
        for (int t = 0; t < 15; ++t) {
          const int n = 1 + t % 3;
          const Matrix Z1 = random_symplectic(base_seed + 400 + t, n);
          const Matrix Z2 = random_symplectic(base_seed + 500 + t, n);
          const auto Y = ConjoinedBasis::wrap(Z1.rightCols(n));
          const auto Yh = ConjoinedBasis::wrap(Z2.rightCols(n));
          const int lhs = comparative_index(Y, Yh, cfg).mu +
                          comparative_index(Yh, Y, cfg).mu;
          if (lhs != rank_tol(wronskian(Y, Yh), cfg)) {
            bad << "mu + swapped mu != rank w at trial " << t;
            break;
          }
          const int mu = comparative_index(Y, Yh, cfg).mu;
          const int mus = dual_comparative_index(Y, Yh, cfg).mu;
          const int bound =
              std::min(rank_tol(Yh.X(), cfg), rank_tol(wronskian(Y, Yh), cfg));
          if (std::max(mu, mus) > bound || bound > n) {
            bad << "comparative index bound violated at trial " << t;
            break;
          }
        }
      });

  Check(results, "focal.staircase").run([&](std::ostringstream& bad) {
    const auto trig = trig_family(5);
    for (int r = 0; r < 6; ++r) {
      const double lam = (r + 0.5) * kPi / 6.0;
      const long ld =
          focal_count(trig, lam, 0, Direction::forward, cfg).total;
      if (ld != r) bad << "staircase value at lambda=" << lam << " is " << ld;
    }
  });

  Check(results, "focal.anchor-duality").run([&](std::ostringstream& bad) {
    for (int s = 0; s < 8; ++s) {
      const auto fam =
          random_monotone_family(base_seed + 600 + s, 1 + s % 2, 4, 1);
      const double lam = -0.8 + 0.2 * s;
      const long fwd = focal_count(fam, lam, 0, Direction::forward, cfg).total;
      const long bwd =
          focal_count(fam, lam, fam.N + 1, Direction::backward, cfg).total;
      if (fwd != bwd) {
        bad << "anchor duality failed at seed offset " << s;
        break;
      }
    }
  });

  Check(results, "lambdascan.isolated-dip").run([&](std::ostringstream& bad) {
    MatrixFamily mf;
    mf.eval = [](double lam) {
      Matrix A(1, 1);
      A << std::sin(lam);
      return A;
    };
    const auto events = scan_rank_jumps(mf, 0.4, 1.5 * kPi, scan_cfg);
    if (events.size() != 1 || std::abs(events[0].lambda0 - kPi) > 1e-6 ||
        events[0].multiplicity != 1) {
      bad << "sin scan found " << events.size() << " events";
    }
  });

  Check(results, "lambdascan.monotone-index-oracle")
      .run([&](std::ostringstream& bad) {
        for (int s = 0; s < 10; ++s) {
          const int n = 1 + s % 3;
          const Matrix Q0 = 0.5 * (random_symplectic(base_seed + 700 + s, n) +
                                   random_symplectic(base_seed + 700 + s, n)
                                       .transpose())
                                      .topLeftCorner(n, n);
          const Matrix W = random_psd(base_seed + 800 + s, n) +
                           0.3 * Matrix::Identity(n, n);
          MatrixFamily mf;
          mf.eval = [Q0, W](double lam) { return Matrix(Q0 + lam * W); };
          const long by_index = monotone_index_jump(mf, -2.0, 2.0, scan_cfg);
          long by_scan = 0;
          for (const auto& ev : scan_rank_jumps(mf, -2.0, 2.0, scan_cfg)) {
            by_scan += ev.multiplicity;
          }
          if (by_index != by_scan) {
            bad << "index jump " << by_index << " != scan sum " << by_scan
                << " at seed offset " << s;
            break;
          }
        }
      });

  Check(results, "osccount.trig-intervals").run([&](std::ostringstream& bad) {
    const auto trig = trig_family(5);
    const std::vector<CountMethod> methods = {
        CountMethod::parse("classical-forward"),
        CountMethod::parse("classical-backward"),
        CountMethod::parse("renormalized-forward-a"),
        CountMethod::parse("renormalized-backward-a"),
        CountMethod::parse("invariant"),
        CountMethod::parse("oracle")};
    const auto first = count_many(trig, 4 * kPi / 6, 5 * kPi / 6, methods, cfg);
    for (const auto& r : first) {
      if (r.total != 1) bad << r.method << " got " << r.total << " want 1; ";
    }
    const auto second = count_many(trig, 5 * kPi / 6, 7 * kPi / 6, methods, cfg);
    for (const auto& r : second) {
      if (r.total != 2) bad << r.method << " got " << r.total << " want 2; ";
    }
  });

  Check(results, "osccount.cross-method-agreement")
      .run([&](std::ostringstream& bad) {
        const std::vector<CountMethod> methods = {
            CountMethod::parse("classical-forward"),
            CountMethod::parse("classical-backward"),
            CountMethod::parse("invariant"),
            CountMethod::parse("oracle")};
        for (int s = 0; s < 3; ++s) {
          const auto fam =
              random_monotone_family(base_seed + 900 + s, 1 + s % 2, 3, 1);
          const auto reps = count_many(fam, -0.7, 0.6, methods, scan_cfg);
          for (const auto& r : reps) {
            if (r.total != reps.front().total) {
              bad << "seed offset " << s << ": " << r.method << "="
                  << r.total << " vs " << reps.front().method << "="
                  << reps.front().total << "; ";
            }
          }
        }
      });

  Check(results, "reports.round-trip").run([&](std::ostringstream& bad) {
    CountReport rep;
    rep.method = "oracle";
    rep.a = 0.25;
    rep.b = 1.5;
    rep.total = 3;
    rep.terms = {{"eigenvalue_sum", 3}};
    rep.events = {{"X", -1, 0.5, 1}, {"X", -1, 1.25, 2}};
    const auto back_json = reports_from_json(reports_to_json({rep}));
    const auto back_csv = reports_from_csv(reports_to_csv({rep}));
    for (const auto& back : {back_json, back_csv}) {
      if (back.size() != 1 || back[0].method != rep.method ||
          back[0].total != rep.total || back[0].terms != rep.terms ||
          back[0].events.size() != rep.events.size()) {
        bad << "round trip mismatch";
      }
    }
  });

  return results;
}

bool print_selftest(std::ostream& os,
                    const std::vector<SelftestResult>& results) {
  bool all = true;
  for (const SelftestResult& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.pass && !r.detail.empty()) os << "  (" << r.detail << ")";
    os << "\n";
    all = all && r.pass;
  }
  os << (all ? "selftest: all checks passed" : "selftest: FAILURES present")
     << "\n";
  return all;
}

}  // namespace symosc
