#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace slsh {

struct SelftestResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the built-in property suites (lift identities and bounds, parameter
/// guarantees, antipodal product law, ellipsoid containments, weighted and
/// centroid identities, rigid isometry, estimator calibration) at smoke-test
/// sample sizes. Deterministic under `seed`.
std::vector<SelftestResult> run_selftest(std::uint64_t seed);

/// Prints one PASS/FAIL line per suite; returns true when all pass.
bool report_selftest(const std::vector<SelftestResult>& results, std::ostream& out);

}  // namespace slsh
