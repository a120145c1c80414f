#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "beprod/block_encoding.hpp"

namespace beprod {

struct RunConfig {
    std::uint64_t seed = 0;
    Tolerance tol;
    int max_verify_wires = kDefaultMaxVerifyWires;
    std::string output;  // empty: stdout
};

/// Per-construction summary. Identical seed and inputs produce byte-identical
/// output (no timestamps or timings in here).
struct Report {
    std::string construction;
    int qubit_count = 0;
    std::map<std::string, int> gate_histogram;
    std::int64_t elementary_estimate = 0;
    int oracle_queries = 0;
    std::string bound_formula;   // stated cost bound, as a formula
    std::string bound_measured;  // measured counts backing it
    std::string verification;    // pass | fail | skipped
    double max_deviation = 0.0;
    std::string verification_note;
    double alpha_out = 1.0;
    std::optional<double> success_probability;
    std::uint64_t seed = 0;

    std::string to_text() const;
    std::string to_json() const;
};

Report make_report(const std::string& construction, const BlockEncoding& be,
                   const VerifyResult& vr, const RunConfig& cfg);

void fill_counts(Report& r, const Circuit& c);

}  // namespace beprod
