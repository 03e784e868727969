#pragma once

#include "symosc/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace symosc {

struct SelftestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Cross-module invariant sweep at desk scale; deterministic for a fixed
/// base seed.  Exceptions inside a check are caught and recorded as failures.
std::vector<SelftestResult> run_selftest(const ToleranceConfig& cfg,
                                         std::uint64_t base_seed);

/// Prints one line per check and a summary; returns true iff all passed.
bool print_selftest(std::ostream& os, const std::vector<SelftestResult>& results);

}  // namespace symosc
