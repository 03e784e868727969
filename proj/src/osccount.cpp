#include "symosc/osccount.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symosc {

namespace {

const char* kind_name(CountMethodKind k) {
  switch (k) {
    case CountMethodKind::classical_forward: return "classical-forward";
    case CountMethodKind::classical_backward: return "classical-backward";
    case CountMethodKind::transformed_forward: return "transformed-forward";
    case CountMethodKind::transformed_backward: return "transformed-backward";
    case CountMethodKind::renormalized_forward_a: return "renormalized-forward-a";
    case CountMethodKind::renormalized_forward_b: return "renormalized-forward-b";
    case CountMethodKind::renormalized_backward_a: return "renormalized-backward-a";
    case CountMethodKind::renormalized_backward_b: return "renormalized-backward-b";
    case CountMethodKind::invariant: return "invariant";
    case CountMethodKind::oracle: return "oracle";
  }
  return "?";
}

void append_events(CountReport& rep, const FamilyJumpReport& jr,
                   const std::string& target) {
  for (size_t k = 0; k < jr.per_k.size(); ++k) {
    for (const JumpEvent& ev : jr.per_k[k]) {
      rep.events.push_back(
          {target, static_cast<int>(k), ev.lambda0, ev.multiplicity});
    }
  }
}

// l_d / l_d^* of the transformed principal solution R^{-1} Y^{[anchor]}(lam)
// with respect to the transformed coefficients.
long transformed_focal_sum(const SymplecticFamily& stilde,
                           const std::vector<Matrix>& Rinv,
                           const FundamentalTrajectory& tr, Direction dir,
                           const ToleranceConfig& cfg) {
  long total = 0;
  for (int k = 0; k <= stilde.N; ++k) {
    const auto Yk = ConjoinedBasis::wrap(Rinv[static_cast<size_t>(k)] * tr.basis(k));
    const auto Yk1 =
        ConjoinedBasis::wrap(Rinv[static_cast<size_t>(k + 1)] * tr.basis(k + 1));
    total += focal_multiplicity(Yk, Yk1, stilde.coefficient(k, tr.lambda), dir,
                                cfg)
                 .m;
  }
  return total;
}

std::vector<Matrix> inverses(const std::vector<Matrix>& R) {
  std::vector<Matrix> out;
  out.reserve(R.size());
  for (const Matrix& Rk : R) out.push_back(symplectic_inverse(Rk));
  return out;
}

// Attach the analytic B-block hints of the renormalized transform when the
// base family ships them.
void attach_renorm_hints(SymplecticFamily& stilde, const SymplecticFamily& base,
                         double beta) {
  if (!base.renorm_b_hints) return;
  auto hints = base.renorm_b_hints;
  stilde.b_jump_hints = [hints, beta](int k, double lo, double hi) {
    return hints(k, beta, lo, hi);
  };
}

struct RenormSetup {
  SymplecticFamily stilde;
  std::vector<Matrix> Rinv;
};

RenormSetup renorm_setup(const SymplecticFamily& fam, TrajectoryCache& cache,
                         int anchor, double beta, const ToleranceConfig& cfg) {
  auto tr = cache.get(beta, anchor);
  RenormSetup out{transform_family(fam, tr->Z, cfg), inverses(tr->Z)};
  attach_renorm_hints(out.stilde, fam, beta);
  return out;
}

}  // namespace

std::string CountMethod::name() const { return kind_name(kind); }

CountMethod CountMethod::parse(const std::string& token) {
  static const std::vector<CountMethodKind> kinds = {
      CountMethodKind::classical_forward,
      CountMethodKind::classical_backward,
      CountMethodKind::renormalized_forward_a,
      CountMethodKind::renormalized_forward_b,
      CountMethodKind::renormalized_backward_a,
      CountMethodKind::renormalized_backward_b,
      CountMethodKind::invariant,
      CountMethodKind::oracle};
  for (CountMethodKind k : kinds) {
    if (token == kind_name(k)) return CountMethod{k, {}};
  }
  // Accept the parenthesized spelling for the renormalized anchors.
  if (token == "renormalized-forward(a)")
    return CountMethod{CountMethodKind::renormalized_forward_a, {}};
  if (token == "renormalized-forward(b)")
    return CountMethod{CountMethodKind::renormalized_forward_b, {}};
  if (token == "renormalized-backward(a)")
    return CountMethod{CountMethodKind::renormalized_backward_a, {}};
  if (token == "renormalized-backward(b)")
    return CountMethod{CountMethodKind::renormalized_backward_b, {}};
  throw ContractViolation("unknown counting method '" + token + "'");
}

CountReport count_eigenvalues(const SymplecticFamily& fam, double a, double b,
                              const CountMethod& method,
                              const ToleranceConfig& cfg,
                              TrajectoryCache* cache) {
  cfg.validate();
  if (a > b) throw ContractViolation("count_eigenvalues: need a <= b");
  CountReport rep;
  rep.method = method.name();
  rep.a = a;
  rep.b = b;
  if (a == b) return rep;  // empty half-open interval

  TrajectoryCache local(fam, cfg);
  TrajectoryCache& tc = cache ? *cache : local;

  {
    const MonotonicityReport mono = certify_monotonicity(fam, a, b, 9, cfg);
    if (!mono.pass) {
      std::ostringstream os;
      os << "count_eigenvalues: monotonicity certification failed, min "
         << "eigenvalue " << mono.min_eigenvalue << " at k=" << mono.argmin_k
         << " lambda=" << mono.argmin_lambda;
      throw AssumptionViolation(os.str());
    }
  }

  switch (method.kind) {
    case CountMethodKind::classical_forward: {
      const long lb =
          focal_count_along(*tc.get(b, 0), fam, Direction::forward, cfg).total;
      const long la =
          focal_count_along(*tc.get(a, 0), fam, Direction::forward, cfg).total;
      const FamilyJumpReport js = sum_b_jumps(fam, a, b, cfg);
      rep.terms = {{"forward_focal_b", lb},
                   {"forward_focal_a", la},
                   {"jump_sum", js.total}};
      append_events(rep, js, "B");
      rep.total = lb - la + js.total;
      break;
    }
    case CountMethodKind::classical_backward: {
      const long lb = focal_count_along(*tc.get(b, fam.N + 1), fam,
                                        Direction::backward, cfg)
                          .total;
      const long la = focal_count_along(*tc.get(a, fam.N + 1), fam,
                                        Direction::backward, cfg)
                          .total;
      const FamilyJumpReport js = sum_b_jumps(fam, a, b, cfg);
      rep.terms = {{"backward_focal_b", lb},
                   {"backward_focal_a", la},
                   {"jump_sum", js.total}};
      append_events(rep, js, "B");
      rep.total = lb - la + js.total;
      break;
    }
    case CountMethodKind::transformed_forward:
    case CountMethodKind::transformed_backward: {
      const bool fwd = method.kind == CountMethodKind::transformed_forward;
      if (static_cast<int>(method.R.size()) != fam.N + 2) {
        throw ContractViolation("transformed method: need R_0..R_{N+1}");
      }
      const Matrix& pinned = fwd ? method.R.back() : method.R.front();
      const Matrix I = Matrix::Identity(2 * fam.n, 2 * fam.n);
      if ((pinned - I).cwiseAbs().maxCoeff() > 100.0 * cfg.tol_symp) {
        throw ContractViolation(fwd
                                    ? "transformed-forward: R_{N+1} must be I"
                                    : "transformed-backward: R_0 must be I");
      }
      SymplecticFamily stilde = transform_family(fam, method.R, cfg);
      const std::vector<Matrix> Rinv = inverses(method.R);
      const int anchor = fwd ? 0 : fam.N + 1;
      const Direction dir = fwd ? Direction::forward : Direction::backward;
      const long lb =
          transformed_focal_sum(stilde, Rinv, *tc.get(b, anchor), dir, cfg);
      const long la =
          transformed_focal_sum(stilde, Rinv, *tc.get(a, anchor), dir, cfg);
      const FamilyJumpReport js = sum_b_jumps(stilde, a, b, cfg);
      rep.terms = {{fwd ? "transformed_focal_b" : "transformed_backward_focal_b", lb},
                   {fwd ? "transformed_focal_a" : "transformed_backward_focal_a", la},
                   {"jump_sum", js.total}};
      append_events(rep, js, "B~");
      rep.total = lb - la + js.total;
      break;
    }
    case CountMethodKind::renormalized_forward_a: {
      const RenormSetup rs = renorm_setup(fam, tc, fam.N + 1, a, cfg);
      const long lb = transformed_focal_sum(rs.stilde, rs.Rinv, *tc.get(b, 0),
                                            Direction::forward, cfg);
      const FamilyJumpReport js = sum_b_jumps(rs.stilde, a, b, cfg);
      rep.terms = {{"transformed_focal_b", lb}, {"jump_sum", js.total}};
      append_events(rep, js, "B~");
      rep.total = lb + js.total;
      break;
    }
    case CountMethodKind::renormalized_forward_b: {
      const RenormSetup rs = renorm_setup(fam, tc, fam.N + 1, b, cfg);
      const long la = transformed_focal_sum(rs.stilde, rs.Rinv, *tc.get(a, 0),
                                            Direction::forward, cfg);
      const FamilyJumpReport js = sum_b_jumps(rs.stilde, a, b, cfg);
      rep.terms = {{"transformed_focal_a", la}, {"jump_sum", js.total}};
      append_events(rep, js, "B~");
      rep.total = -la + js.total;
      break;
    }
    case CountMethodKind::renormalized_backward_a: {
      const RenormSetup rs = renorm_setup(fam, tc, 0, a, cfg);
      const long lb =
          transformed_focal_sum(rs.stilde, rs.Rinv, *tc.get(b, fam.N + 1),
                                Direction::backward, cfg);
      const FamilyJumpReport js = sum_b_jumps(rs.stilde, a, b, cfg);
      rep.terms = {{"transformed_backward_focal_b", lb}, {"jump_sum", js.total}};
      append_events(rep, js, "B~");
      rep.total = lb + js.total;
      break;
    }
    case CountMethodKind::renormalized_backward_b: {
      const RenormSetup rs = renorm_setup(fam, tc, 0, b, cfg);
      const long la =
          transformed_focal_sum(rs.stilde, rs.Rinv, *tc.get(a, fam.N + 1),
                                Direction::backward, cfg);
      const FamilyJumpReport js = sum_b_jumps(rs.stilde, a, b, cfg);
      rep.terms = {{"transformed_backward_focal_a", la}, {"jump_sum", js.total}};
      append_events(rep, js, "B~");
      rep.total = -la + js.total;
      break;
    }
    case CountMethodKind::invariant: {
      const long L = augmented_focal_count(fam, b, a, Direction::backward, cfg,
                                           &tc);
      const FamilyJumpReport js = sum_relative_jumps(fam, a, b, cfg);
      rep.terms = {{"augmented_backward_focal", L}, {"jump_sum", js.total}};
      append_events(rep, js, "rel");
      rep.total = L + js.total;
      break;
    }
    case CountMethodKind::oracle: {
      long total = 0;
      for (const JumpEvent& ev : finite_eigenvalues(fam, a, b, cfg)) {
        rep.events.push_back({"X", -1, ev.lambda0, ev.multiplicity});
        total += ev.multiplicity;
      }
      rep.terms = {{"eigenvalue_sum", total}};
      rep.total = total;
      break;
    }
  }
  return rep;
}

std::vector<CountReport> count_many(const SymplecticFamily& fam, double a,
                                    double b,
                                    const std::vector<CountMethod>& methods,
                                    const ToleranceConfig& cfg) {
  TrajectoryCache cache(fam, cfg);
  std::vector<CountReport> out;
  out.reserve(methods.size());
  for (const CountMethod& m : methods) {
    out.push_back(count_eigenvalues(fam, a, b, m, cfg, &cache));
  }
  return out;
}

void verify_agreement(const std::vector<CountReport>& reports) {
  if (reports.empty()) return;
  const long ref = reports.front().total;
  bool ok = true;
  std::ostringstream os;
  os << "method totals disagree:";
  for (const CountReport& r : reports) {
    os << "\n  " << r.method << " = " << r.total << " [";
    for (size_t i = 0; i < r.terms.size(); ++i) {
      os << (i ? ", " : "") << r.terms[i].first << "=" << r.terms[i].second;
    }
    os << "]";
    for (const LabeledEvent& ev : r.events) {
      os << "\n    " << ev.target << " k=" << ev.k << " lambda0=" << ev.lambda0
         << " mult=" << ev.multiplicity;
    }
    if (r.total != ref) ok = false;
  }
  if (!ok) throw MethodDisagreement(os.str());
}

RelativeOscillation relative_oscillation_numbers(const SymplecticFamily& fam,
                                                 const SymplecticFamily& fam_hat,
                                                 double a, double b,
                                                 const ToleranceConfig& cfg) {
  if (fam.n != fam_hat.n || fam.N != fam_hat.N) {
    throw ContractViolation(
        "relative_oscillation_numbers: families must share n and N");
  }
  const FundamentalTrajectory Z = propagate(fam, a, 0, cfg);
  const FundamentalTrajectory Zhat = propagate(fam_hat, b, fam.N + 1, cfg);
  std::vector<Matrix> V;
  V.reserve(static_cast<size_t>(fam.N + 2));
  for (int k = 0; k <= fam.N + 1; ++k) {
    V.push_back(symplectic_inverse(Zhat.at(k)) * Z.at(k));
  }
  RelativeOscillation out;
  for (int k = 0; k <= fam.N; ++k) {
    const auto aug_k = ConjoinedBasis::wrap(augment(V[static_cast<size_t>(k)], cfg));
    const auto aug_k1 =
        ConjoinedBasis::wrap(augment(V[static_cast<size_t>(k + 1)], cfg));
    const auto aug_S =
        ConjoinedBasis::wrap(augment(fam.coefficient(k, a), cfg));
    const auto aug_Shat =
        ConjoinedBasis::wrap(augment(fam_hat.coefficient(k, b), cfg));
    const long first = comparative_index(aug_k, aug_k1, cfg).mu -
                       comparative_index(aug_Shat, aug_S, cfg).mu;
    const long second = comparative_index(aug_S, aug_Shat, cfg).mu -
                        comparative_index(aug_k1, aug_k, cfg).mu;
    out.per_k.push_back(first);
    out.per_k_alt.push_back(second);
    out.total += first;
  }
  return out;
}

long augmented_focal_count(const SymplecticFamily& fam, double hat_lambda,
                           double z_lambda, Direction direction,
                           const ToleranceConfig& cfg, TrajectoryCache* cache) {
  TrajectoryCache local(fam, cfg);
  TrajectoryCache& tc = cache ? *cache : local;
  const auto Zhat = tc.get(hat_lambda, fam.N + 1);
  const auto Z = tc.get(z_lambda, 0);
  std::vector<ConjoinedBasis> aug;
  aug.reserve(static_cast<size_t>(fam.N + 2));
  for (int k = 0; k <= fam.N + 1; ++k) {
    aug.push_back(ConjoinedBasis::wrap(
        augment(symplectic_inverse(Zhat->at(k)) * Z->at(k), cfg)));
  }
  long total = 0;
  for (int k = 0; k <= fam.N; ++k) {
    const auto& lo = aug[static_cast<size_t>(k)];
    const auto& hi = aug[static_cast<size_t>(k + 1)];
    total += direction == Direction::forward
                 ? comparative_index(hi, lo, cfg).mu
                 : comparative_index(lo, hi, cfg).mu;
  }
  return total;
}

CriteriaReport check_criteria(const SymplecticFamily& fam, double a, double b,
                              const ToleranceConfig& cfg, const Matrix* R,
                              const Matrix* P) {
  if (!(a < b)) throw ContractViolation("check_criteria: need a < b");
  CriteriaReport rep;
  const FamilyJumpReport bj = sum_b_jumps(fam, a, b, cfg);
  const FamilyJumpReport rj = sum_relative_jumps(fam, a, b, cfg);
  for (int k = 0; k <= fam.N; ++k) {
    rep.b_rank_constant.push_back(bj.per_k[static_cast<size_t>(k)].empty());
    rep.rel_jumps_zero.push_back(rj.per_k[static_cast<size_t>(k)].empty());
    const auto Sb = ConjoinedBasis::wrap(augment(fam.coefficient(k, b), cfg));
    const auto Sa = ConjoinedBasis::wrap(augment(fam.coefficient(k, a), cfg));
    rep.majorant.push_back(comparative_index(Sb, Sa, cfg).mu == 0);
  }
  if (R != nullptr && P != nullptr) {
    if (!is_symplectic(*R, cfg) || !is_symplectic(*P, cfg)) {
      throw ContractViolation("check_criteria: R, P must be symplectic");
    }
    const Matrix Rinv = symplectic_inverse(*R);
    std::vector<bool> ok;
    for (int k = 0; k <= fam.N; ++k) {
      MatrixFamily mf;
      const Matrix Pc = *P;
      mf.eval = [&fam, k, Rinv, Pc](double lam) {
        const Matrix bar = Rinv * fam.coefficient(k, lam) * Pc;
        return Matrix(bar.topRightCorner(fam.n, fam.n));
      };
      mf.label = fam.label + ":barB[k=" + std::to_string(k) + "]";
      ok.push_back(scan_rank_jumps(mf, a, b, cfg).empty());
    }
    rep.transformed_rank_constant = std::move(ok);
  }
  for (int k = 0; k <= fam.N; ++k) {
    const auto ku = static_cast<size_t>(k);
    if (rep.b_rank_constant[ku] && !(rep.majorant[ku] && rep.rel_jumps_zero[ku])) {
      rep.implication_ok = false;
    }
  }
  return rep;
}

CountReport count_below(const SymplecticFamily& fam, double b,
                        double lambda_floor, const CountMethod& method,
                        const ToleranceConfig& cfg) {
  if (!(lambda_floor < b)) {
    throw ContractViolation("count_below: need lambda_floor < b");
  }
  // Best-effort falsification of the settled-rank assumption: scan one
  // window under the floor with a coarsened grid.
  const double span = 2.0 * 3.14159265358979323846 + 0.5;
  const ToleranceConfig probe_cfg =
      cfg.with_gap(std::max(cfg.lambda_min_gap, span / 256.0));
  for (int k = 0; k <= fam.N; ++k) {
    MatrixFamily mf;
    mf.eval = [&fam, k](double lam) { return fam.b_block(k, lam); };
    if (fam.b_jump_hints) {
      mf.hints = [&fam, k](double lo, double hi) {
        return fam.b_jump_hints(k, lo, hi);
      };
    }
    mf.label = fam.label + ":floor-probe[k=" + std::to_string(k) + "]";
    const auto events =
        scan_rank_jumps(mf, lambda_floor - span, lambda_floor, probe_cfg);
    if (!events.empty()) {
      std::ostringstream os;
      os << "count_below: B-block rank varies below the floor at k=" << k
         << " lambda=" << events.front().lambda0;
      throw AssumptionViolation(os.str());
    }
  }
  CountReport rep = count_eigenvalues(fam, lambda_floor, b, method, cfg);
  const long m =
      focal_count(fam, lambda_floor, 0, Direction::forward, cfg).total;
  rep.terms.emplace_back("floor_focal", m);
  return rep;
}

}  // namespace symosc
