#include "symosc/osccount.hpp"
#include "symosc/report_io.hpp"
#include "symosc/selftest.hpp"
#include "symosc/systems.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

namespace {

using namespace symosc;

constexpr int kExitOk = 0;
constexpr int kExitSelftest = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format;
  bool verify = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

RunConfig load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) {
    throw ContractViolation("missing --config PATH");
  }
  RunConfig cfg = parse_config_file(opts.config_path);
  if (!opts.out_path.empty()) cfg.out_path = opts.out_path;
  if (!opts.format.empty()) {
    if (opts.format != "json" && opts.format != "csv") {
      throw ContractViolation("--format must be json or csv");
    }
    cfg.format = opts.format;
  }
  if (opts.verify) cfg.verify = true;
  if (opts.seed_set) cfg.family.seed = opts.seed;
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out_path.empty()) {
    std::cout << payload << std::endl;
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw ContractViolation("cannot write " + cfg.out_path);
  out << payload;
}

int cmd_count(const CommonOpts& opts) {
  RunConfig cfg;
  try {
    cfg = load_config(opts);
    if (cfg.methods.empty()) {
      throw ContractViolation("config: methods must be nonempty for count");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const SymplecticFamily fam = build_family(cfg.family, cfg.tolerances);
    const auto reports =
        count_many(fam, cfg.a, cfg.b, cfg.methods, cfg.tolerances);
    emit(cfg, cfg.format == "csv" ? reports_to_csv(reports)
                                  : reports_to_json(reports));
    if (cfg.verify) {
      verify_agreement(reports);
      std::cerr << "verify: all " << reports.size() << " methods agree on "
                << reports.front().total << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

int cmd_scan(const CommonOpts& opts) {
  RunConfig cfg;
  try {
    cfg = load_config(opts);
    if (cfg.scan_target != "B" && cfg.scan_target != "X" &&
        cfg.scan_target != "rho" && cfg.scan_target != "rel") {
      throw ContractViolation("config: scan target must be B, X or rho");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const SymplecticFamily fam = build_family(cfg.family, cfg.tolerances);
    std::vector<LabeledEvent> rows;
    if (cfg.scan_target == "X") {
      for (const JumpEvent& ev :
           finite_eigenvalues(fam, cfg.a, cfg.b, cfg.tolerances)) {
        rows.push_back({"X", -1, ev.lambda0, ev.multiplicity});
      }
    } else {
      const bool rel = cfg.scan_target != "B";
      const FamilyJumpReport jr =
          rel ? sum_relative_jumps(fam, cfg.a, cfg.b, cfg.tolerances)
              : sum_b_jumps(fam, cfg.a, cfg.b, cfg.tolerances);
      for (size_t k = 0; k < jr.per_k.size(); ++k) {
        for (const JumpEvent& ev : jr.per_k[k]) {
          rows.push_back({rel ? "rho" : "B", static_cast<int>(k), ev.lambda0,
                          ev.multiplicity});
        }
      }
    }
    std::sort(rows.begin(), rows.end(),
              [](const LabeledEvent& x, const LabeledEvent& y) {
                return x.lambda0 != y.lambda0 ? x.lambda0 < y.lambda0
                                              : x.k < y.k;
              });
    emit(cfg, cfg.format == "csv" ? events_to_csv(rows) : events_to_json(rows));
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

int cmd_certify(const CommonOpts& opts) {
  RunConfig cfg;
  try {
    cfg = load_config(opts);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const SymplecticFamily fam = build_family(cfg.family, cfg.tolerances);
    const MonotonicityReport rep =
        certify_monotonicity(fam, cfg.a, cfg.b, 33, cfg.tolerances);
    std::cout << (rep.pass ? "PASS" : "FAIL")
              << " min_eigenvalue=" << rep.min_eigenvalue
              << " at k=" << rep.argmin_k << " lambda=" << rep.argmin_lambda
              << " max_asymmetry=" << rep.max_asymmetry << "\n";
    for (const std::string& w : rep.warnings) std::cout << "warning: " << w << "\n";
    return rep.pass ? kExitOk : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

int cmd_selftest(const CommonOpts& opts) {
  ToleranceConfig tol;
  std::uint64_t seed = 12345;
  try {
    if (!opts.config_path.empty()) {
      tol = parse_config_file(opts.config_path).tolerances;
    }
    if (opts.seed_set) seed = opts.seed;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto results = run_selftest(tol, seed);
  return print_selftest(std::cout, results) ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-eigenvalue counts for discrete symplectic systems"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&opts](CLI::App* sub, bool with_config_required) {
    auto* c = sub->add_option("--config", opts.config_path, "config JSON path");
    if (with_config_required) c->required();
    sub->add_option("--out", opts.out_path, "output path (default stdout)");
    sub->add_option("--format", opts.format, "json or csv");
    sub->add_flag("--verify", opts.verify, "check cross-method agreement");
    sub->add_option("--seed", opts.seed, "override the family seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
  };

  auto* count = app.add_subcommand("count", "count finite eigenvalues in (a, b]");
  add_common(count, true);
  auto* scan = app.add_subcommand("scan", "list rank-jump events");
  add_common(scan, true);
  auto* certify = app.add_subcommand("certify", "certify the monotonicity assumption");
  add_common(certify, true);
  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (count->parsed()) return cmd_count(opts);
  if (scan->parsed()) return cmd_scan(opts);
  if (certify->parsed()) return cmd_certify(opts);
  if (selftest->parsed()) return cmd_selftest(opts);
  return kExitConfig;
}
