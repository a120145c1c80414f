#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "beprod/cli_commands.hpp"
#include "beprod/selftest.hpp"

namespace {

int env_max_wires() {
    if (const char* v = std::getenv("BEPROD_MAX_WIRES")) {
        try {
            return std::stoi(v);
        } catch (...) {
            std::cerr << "warning: ignoring malformed BEPROD_MAX_WIRES\n";
        }
    }
    return beprod::kDefaultMaxVerifyWires;
}

std::vector<int> parse_dims(const std::string& csv) {
    std::vector<int> dims;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
    return dims;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beprod — gate-level block-encoding products: build, verify, count, export"};
    app.require_subcommand(1);

    beprod::BuildOptions build;
    double build_tol = 1e-10;
    std::string dims_csv;
    double c_norm = -1.0;
    auto* cmd_b = app.add_subcommand("build", "construct an encoding and verify it");
    cmd_b->add_option("kind", build.kind,
                      "kron | kron-qe | matmul | matmul-qe | chain | hadamard | conv | vec | "
                      "gadget | tree | kron-sum")
        ->required();
    cmd_b->add_option("--b", build.b_input, "left factor: matrix file or random:MxN");
    cmd_b->add_option("--c", build.c_input, "right factor: matrix file or random:MxN");
    cmd_b->add_option("--a", build.a_input, "single input matrix (vec)");
    cmd_b->add_option("--oracle", build.oracle_inputs, "gadget oracle matrix (repeatable)");
    cmd_b->add_option("--term", build.terms, "kron-sum term, coeff:fileA,fileB (repeatable)");
    cmd_b->add_option("--dims", dims_csv, "chain: comma-separated encoding widths");
    cmd_b->add_option("--system", build.system, "chain: system wire count");
    cmd_b->add_option("--matrix", build.chain_inputs, "chain: input matrix (repeatable)");
    cmd_b->add_option("--wires", build.conv_wires, "conv: wires per register");
    cmd_b->add_option("--psi", build.psi_input, "conv: first state (2^n amplitudes)");
    cmd_b->add_option("--phi", build.phi_input, "conv: second state (2^n amplitudes)");
    cmd_b->add_option("--depth", build.depth, "tree: depth n (>= 2)");
    cmd_b->add_option("--alpha", build.alpha, "tree: interior diagonal entry");
    cmd_b->add_option("--beta", build.beta, "tree: edge weight");
    cmd_b->add_option("--gamma", build.gamma, "tree: root/leaf diagonal entry");
    cmd_b->add_option("--normalization", c_norm, "tree: normalization c (default 2*sqrt(2)+2)");
    cmd_b->add_option("--bwires", build.b_wires, "pad the left encoding to this width");
    cmd_b->add_option("--cwires", build.c_wires, "pad the right encoding to this width");
    cmd_b->add_option("--awires", build.a_wires, "pad the input encoding to this width");
    cmd_b->add_option("--circuit-out", build.circuit_out, "write the circuit JSON here");
    cmd_b->add_option("--json", build.json_out, "write the machine-readable report here");
    cmd_b->add_option("--output", build.cfg.output, "write the text report here (default stdout)");
    cmd_b->add_option("--seed", build.cfg.seed, "seed for random: inputs");
    cmd_b->add_option("--tol", build_tol, "verification tolerance (default 1e-10)");

    beprod::VerifyOptions verify;
    double verify_tol = 1e-10;
    auto* cmd_v = app.add_subcommand("verify", "check a circuit file against a target matrix");
    cmd_v->add_option("circuit", verify.circuit_file, "circuit JSON file")->required();
    cmd_v->add_option("target", verify.target_file, "target matrix JSON file")->required();
    cmd_v->add_option("--matrices", verify.sidecar_file, "sidecar label->matrix table");
    cmd_v->add_option("--rows", verify.rows, "encoded rows (default: target rows)");
    cmd_v->add_option("--cols", verify.cols, "encoded cols (default: target cols)");
    cmd_v->add_option("--alpha", verify.alpha, "subnormalization (default 1)");
    cmd_v->add_option("--tol", verify_tol, "tolerance (default 1e-10)");

    beprod::ExportOptions exp;
    auto* cmd_e = app.add_subcommand("export", "re-emit a circuit as JSON or a gate listing");
    cmd_e->add_option("circuit", exp.circuit_file, "circuit JSON file")->required();
    cmd_e->add_option("--matrices", exp.sidecar_file, "sidecar label->matrix table");
    cmd_e->add_option("--format", exp.format, "json | text (default json)");
    cmd_e->add_flag("--lower", exp.lower, "lower structured adders to H/phase gates");
    cmd_e->add_option("--out", exp.out_file, "output file (default stdout)");

    beprod::SelftestOptions self;
    double self_tol = 1e-10;
    bool self_json = false;
    auto* cmd_s = app.add_subcommand("selftest", "run the frozen regression suite");
    cmd_s->add_option("--only", self.only, "run cases whose name contains this substring");
    cmd_s->add_option("--seed", self.seed, "sweep seed (default 12345)");
    cmd_s->add_option("--tol", self_tol, "comparison tolerance (default 1e-10)");
    cmd_s->add_flag("--json", self_json, "emit the machine-readable summary");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_b->parsed()) {
            build.cfg.tol = beprod::Tolerance(build_tol);
            build.cfg.max_verify_wires = env_max_wires();
            if (!dims_csv.empty()) build.dims = parse_dims(dims_csv);
            if (c_norm >= 0.0) build.normalization = c_norm;
            return beprod::cmd_build(build, std::cout, std::cerr);
        }
        if (cmd_v->parsed()) {
            verify.cfg.tol = beprod::Tolerance(verify_tol);
            verify.cfg.max_verify_wires = env_max_wires();
            return beprod::cmd_verify(verify, std::cout, std::cerr);
        }
        if (cmd_e->parsed()) {
            return beprod::cmd_export(exp, std::cout, std::cerr);
        }
        if (cmd_s->parsed()) {
            self.tol = beprod::Tolerance(self_tol);
            self.max_verify_wires = env_max_wires();
            return beprod::cmd_selftest(self, self_json, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
