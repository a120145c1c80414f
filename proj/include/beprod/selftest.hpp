#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "beprod/complex_matrix.hpp"

namespace beprod {

struct SelftestOptions {
    std::string only;  // substring filter on case names
    Tolerance tol;
    std::uint64_t seed = 12345;
    int max_verify_wires = kDefaultMaxVerifyWires;
};

struct CaseResult {
    std::string name;
    std::string construction;  // which builder / operation the case exercises
    std::string claim;         // the cost or correctness claim under test
    bool passed = false;
    std::string detail;        // measured values, or the failure analysis
    double elapsed_ms = 0.0;
    double budget_s = 0.0;     // wall-time budget, 0 = none
};

struct SelftestSummary {
    std::vector<CaseResult> results;
    bool all_passed() const;
    std::string to_json() const;
};

/// Runs every golden case (deterministic order, fixed seeds). The filter
/// keeps cases whose name contains `only`.
SelftestSummary run_all(const SelftestOptions& opt);

/// Prints one line per case; returns 0 iff everything passed.
int cmd_selftest(const SelftestOptions& opt, bool json_output, std::ostream& out);

}  // namespace beprod
