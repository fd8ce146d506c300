#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace condqubit {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Suite names accepted by run_suite.
const std::vector<std::string>& verify_suites();

/// Runs "states", "geometry", "entropy" or "all". Throws Error{Validation}
/// for an unknown suite name.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed = 0);

/// One line per check, then a summary line. Returns true iff all passed.
bool print_report(std::ostream& os, const std::vector<CheckResult>& results);

} // namespace condqubit
