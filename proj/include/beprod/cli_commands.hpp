#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beprod/report.hpp"

namespace beprod {

/// Shared options of the `build` subcommands. Matrix inputs are file paths
/// or "random:MxN" specs drawn deterministically from the seed.
struct BuildOptions {
    std::string kind;
    std::string b_input, c_input, a_input;
    std::vector<std::string> oracle_inputs;           // gadget
    std::vector<std::string> terms;                   // kron-sum, "coeff:fileA,fileB"
    std::vector<int> dims;                            // chain widths
    int system = 0;                                   // chain system wires
    std::vector<std::string> chain_inputs;            // chain matrices (optional)
    int conv_wires = 0;                               // conv register width
    std::string psi_input, phi_input;                 // conv states (optional)
    int depth = 0;                                    // tree
    double alpha = 0.0, beta = 0.0, gamma = 0.0;      // tree
    std::optional<double> normalization;              // tree c
    int b_wires = 0, c_wires = 0, a_wires = 0;        // optional encoding padding
    std::string circuit_out;
    std::string json_out;
    RunConfig cfg;
};

struct VerifyOptions {
    std::string circuit_file;
    std::string target_file;
    std::string sidecar_file;  // optional {"label": matrix} table
    std::size_t rows = 0, cols = 0;  // 0: take the target's shape
    double alpha = 1.0;
    RunConfig cfg;
};

struct ExportOptions {
    std::string circuit_file;
    std::string sidecar_file;
    std::string format = "json";  // json | text
    bool lower = false;           // lower AddConst gates first
    std::string out_file;         // empty: stdout
};

/// Exit codes: 0 built (verification passed or skipped), 1 verification or
/// construction failure, 2 usage error.
int cmd_build(const BuildOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);
int cmd_export(const ExportOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace beprod
