#include "symosc/report_io.hpp"

#include "symosc/selftest.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace symosc;
using symosc_test::kPi;

namespace {

std::string cli_path() {
  const char* p = std::getenv("SYMOSC_CLI");
  return p ? p : "";
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/symosc_test_" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

int run_cli(const std::string& args) {
  const int rc = std::system((cli_path() + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTrigConfig = R"({
  "schema_version": 1,
  "family": {"kind": "trig", "N": 5},
  "interval": {"a": "PI*4/6", "b": "PI*5/6"},
  "methods": ["classical-forward", "invariant", "oracle"],
  "verify": true
})";

}  // namespace

TEST_CASE("lambda expressions") {
  CHECK(parse_lambda_expr("PI") == doctest::Approx(kPi));
  CHECK(parse_lambda_expr("PI*5/6") == doctest::Approx(kPi * 5 / 6));
  CHECK(parse_lambda_expr("-2*PI/3") == doctest::Approx(-2 * kPi / 3));
  CHECK(parse_lambda_expr(" 0.25 ") == doctest::Approx(0.25));
  CHECK(parse_lambda_expr("3") == doctest::Approx(3.0));
  CHECK(parse_lambda_expr("pi/2") == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(parse_lambda_expr("PI+1"), ContractViolation);
  CHECK_THROWS_AS(parse_lambda_expr("frog"), ContractViolation);
}

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config(kTrigConfig);
  CHECK(cfg.family.kind == "trig");
  CHECK(cfg.family.N == 5);
  CHECK(cfg.a == doctest::Approx(4 * kPi / 6));
  CHECK(cfg.b == doctest::Approx(5 * kPi / 6));
  REQUIRE(cfg.methods.size() == 3);
  CHECK(cfg.methods[0].name() == "classical-forward");
  CHECK(cfg.verify);

  CHECK_THROWS_AS(parse_config("{not json"), ContractViolation);
  CHECK_THROWS_AS(parse_config(R"({"family": {"kind": "trig"},
    "interval": {"a": 2.0, "b": 1.0}})"),
                  ContractViolation);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2,
    "family": {"kind": "trig"}})"),
                  ContractViolation);
}

TEST_CASE("report round trips") {
  CountReport rep;
  rep.method = "classical-forward";
  rep.a = 4 * kPi / 6;
  rep.b = 5 * kPi / 6;
  rep.terms = {{"forward_focal_b", 5}, {"forward_focal_a", 4}, {"jump_sum", 0}};
  rep.events = {{"B", 2, kPi, 1}, {"B", 3, kPi, 1}};
  rep.total = 1;

  for (int pass = 0; pass < 2; ++pass) {
    const auto back = pass == 0 ? reports_from_json(reports_to_json({rep, rep}))
                                : reports_from_csv(reports_to_csv({rep, rep}));
    REQUIRE(back.size() == 2);
    const CountReport& r = back[1];
    CHECK(r.method == rep.method);
    CHECK(r.a == doctest::Approx(rep.a));
    CHECK(r.b == doctest::Approx(rep.b));
    CHECK(r.total == rep.total);
    REQUIRE(r.terms.size() == rep.terms.size());
    for (const auto& t : rep.terms) {
      bool found = false;
      for (const auto& u : r.terms) found = found || u == t;
      CHECK(found);
    }
    REQUIRE(r.events.size() == rep.events.size());
    CHECK(r.events[0].target == "B");
    CHECK(r.events[0].k == 2);
    CHECK(r.events[0].lambda0 == doctest::Approx(kPi));
  }
}

TEST_CASE("event listings round trip through json") {
  std::vector<LabeledEvent> events = {{"X", -1, 0.5236, 1}, {"rho", 2, 1.0, 2}};
  const std::string text = events_to_json(events);
  CHECK(text.find("0.5236") != std::string::npos);
  const std::string csv = events_to_csv(events);
  CHECK(csv.find("rho,2,1,2") != std::string::npos);
}

TEST_CASE("cli count command") {
  REQUIRE_FALSE(cli_path().empty());
  const std::string cfg_path = write_temp("count.json", kTrigConfig);
  const std::string out_path = "/tmp/symosc_test_count_out.json";
  const int rc = run_cli("count --config " + cfg_path + " --out " + out_path);
  CHECK(rc == 0);
  const auto reports = reports_from_json(slurp(out_path));
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) CHECK(r.total == 1);
}

TEST_CASE("cli rejects a malformed interval with exit 2") {
  REQUIRE_FALSE(cli_path().empty());
  const std::string bad = write_temp("bad.json", R"({
    "family": {"kind": "trig", "N": 5},
    "interval": {"a": "PI", "b": "PI"},
    "methods": ["oracle"]})");
  CHECK(run_cli("count --config " + bad) == 2);
  CHECK(run_cli("count --config /tmp/definitely_missing_config.json") == 2);
}

TEST_CASE("cli scan command lists the eigenvalue lattice") {
  REQUIRE_FALSE(cli_path().empty());
  const std::string cfg_path = write_temp("scan.json", R"({
    "family": {"kind": "trig", "N": 5},
    "interval": {"a": "PI/100", "b": "PI"},
    "scan": {"target": "X"}})");
  const std::string out_path = "/tmp/symosc_test_scan_out.csv";
  const int rc =
      run_cli("scan --config " + cfg_path + " --format csv --out " + out_path);
  CHECK(rc == 0);
  const std::string body = slurp(out_path);
  int lines = 0;
  for (char c : body) lines += c == '\n';
  CHECK(lines == 7);  // header + six events
}

TEST_CASE("cli certify command") {
  REQUIRE_FALSE(cli_path().empty());
  const std::string cfg_path = write_temp("certify.json", R"({
    "family": {"kind": "random", "n": 2, "N": 3, "seed": 4},
    "interval": {"a": -1.0, "b": 1.0}})");
  CHECK(run_cli("certify --config " + cfg_path) == 0);
}

TEST_CASE("selftest runs clean with default tolerances") {
  const auto results = run_selftest(ToleranceConfig{}, 12345);
  for (const auto& r : results) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.pass);
  }
  // identical reruns give the identical matrix
  const auto again = run_selftest(ToleranceConfig{}, 12345);
  REQUIRE(again.size() == results.size());
  for (size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].pass == again[i].pass);
    CHECK(results[i].name == again[i].name);
  }
}

TEST_CASE("selftest reports failures under a corrupted tolerance") {
  ToleranceConfig broken;
  broken.tol_rank = 1.0;  // everything is rank-deficient now
  const auto results = run_selftest(broken, 12345);
  bool any_fail = false;
  for (const auto& r : results) any_fail = any_fail || !r.pass;
  CHECK(any_fail);
}
