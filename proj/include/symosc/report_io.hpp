#pragma once

#include "symosc/osccount.hpp"
#include "symosc/systems.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace symosc {

/// Parse a lambda literal: a plain number or a product/quotient chain over
/// numbers and the symbol PI, e.g. "PI*5/6", "-2*PI/3", "0.25".  Exact in the
/// sense that the usual double expression is evaluated left to right.
double parse_lambda_expr(const std::string& text);

/// Full run configuration (one structured-text document).
struct RunConfig {
  int schema_version = 1;
  FamilySpec family;
  double a = 0.0;
  double b = 1.0;
  std::vector<CountMethod> methods;
  ToleranceConfig tolerances;
  std::string out_path;        // empty: stdout
  std::string format = "json"; // json | csv
  bool verify = false;
  std::string scan_target = "B";  // B | X | rel (scan subcommand)
};

/// Parse the JSON config document; throws ContractViolation on schema errors.
RunConfig parse_config(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

std::string report_to_json(const CountReport& rep);
std::string reports_to_json(const std::vector<CountReport>& reps);
CountReport report_from_json(const std::string& text);
std::vector<CountReport> reports_from_json(const std::string& text);

std::string reports_to_csv(const std::vector<CountReport>& reps);
std::vector<CountReport> reports_from_csv(const std::string& text);

std::string events_to_json(const std::vector<LabeledEvent>& events);
std::string events_to_csv(const std::vector<LabeledEvent>& events);

}  // namespace symosc
