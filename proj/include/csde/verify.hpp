#pragma once

#include <string>
#include <vector>

#include "csde/stats.hpp"

namespace csde::verify {

// Verification suites, one per acceptance criterion. Each runs at desk scale
// with pinned seeds and returns one report per check (alpha = 0.01 for
// p-value tests, 3-SE bands for moment tests, explicit bounds otherwise).
std::vector<std::string> suite_names();

// Runs one suite by name; "all" concatenates every suite in order.
// Unknown names throw ConfigError listing the catalog.
std::vector<stats::TestReport> run_suite(const std::string& name);

bool all_pass(const std::vector<stats::TestReport>& reports);

}  // namespace csde::verify
