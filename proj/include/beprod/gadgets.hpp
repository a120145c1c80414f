#pragma once

#include <optional>

#include "beprod/block_encoding.hpp"
#include "beprod/products.hpp"

namespace beprod {

/// Register layout of the compression gadget. Wire order: counter flags (n_c),
/// index register (n_b, most significant first), per-oracle ancillas (n_a),
/// system (n_s).
struct GadgetLayout {
    int n_c = 0;
    int n_b = 1;
    int n_a = 0;
    int n_s = 1;
    std::size_t num_oracles = 0;

    int total() const { return n_c + n_b + n_a + n_s; }
    int b_first() const { return n_c; }
    int a_first() const { return n_c + n_b; }
    int s_first() const { return n_c + n_b + n_a; }
    std::vector<std::string> wire_labels() const;

    void validate() const;
};

GadgetLayout gadget_layout(std::size_t num_oracles, int n_a, int n_s);

/// Index-controlled partial product stage over oracles p..q (1-based). On
/// input |0>_c |k>_b |0>_a |psi>_s the flags/ancillas-zero component carries
/// |k-q+p-1>_b and the ordered product H_min(q,p+k-1) ... H_p applied to psi
/// (no oracle fires once the running index drops to zero or below; the index
/// register works modulo 2^n_b with the most significant wire as sign flag).
Circuit compression_stage(std::size_t p, std::size_t q,
                          const std::vector<BlockEncoding>& oracles, const GadgetLayout& layout);

struct CompressionGadget {
    Circuit circuit;
    GadgetLayout layout;
};

/// Full gadget V: stage 1..K followed by adding K back to the index
/// register. Projected onto flags/ancillas zero and restricted to indices
/// 0..K it equals |0><0| (x) I + sum_k |k><k| (x) H_k...H_1. Each oracle is
/// queried exactly once, with a single (negative) control.
CompressionGadget compression_gadget(const std::vector<BlockEncoding>& oracles);

/// (<0|_{c,a} (x) I) V (|0>_{c,a} (x) I): matrix over (index, system), of
/// dimension 2^(n_b+n_s).
ComplexMatrix compression_projection(const Circuit& circuit, const GadgetLayout& layout,
                                     int max_wires = kDefaultMaxVerifyWires);

/// State-preparation circuit for nonnegative amplitudes via a tree of
/// multi-controlled Ry rotations on ceil(log2 len) wires.
Circuit prepare_state(const std::vector<double>& amplitudes);

/// Linear combination sum_i coeffs[i] * A_i via prepare/select/unprepare.
/// The prepare circuit's |0...0> column must carry amplitudes
/// sqrt(coeffs[i] * alpha_i / sum_j coeffs[j] * alpha_j); when omitted it is
/// synthesized. alpha_out = sum_i coeffs[i] * alpha_i.
BlockEncoding lcu_be(const std::vector<double>& coeffs,
                     const std::vector<BlockEncoding>& encodings,
                     const std::optional<Circuit>& prepare = std::nullopt,
                     const Tolerance& tol = Tolerance());

/// Sum of Kronecker products: folds kron_be within each term, pads widths,
/// then combines terms with lcu_be.
struct KronSumTerm {
    double coeff = 1.0;
    std::vector<BlockEncoding> factors;
};

BlockEncoding kron_sum_be(const std::vector<KronSumTerm>& terms,
                          const std::optional<Circuit>& prepare = std::nullopt);

/// Rotation parameters of the extended-binary-tree encoding.
struct TreeParams {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    double c = 0.0;
    double x = 0.0;
    double gamma_hat = 0.0, gamma_tilde = 0.0, alpha_tilde = 0.0;
    double theta0 = 0.0, theta1 = 0.0, theta2 = 0.0, zeta = 0.0;
};

inline constexpr double kDefaultTreeNormalization = 4.8284271247461903;  // 2*sqrt(2) + 2

/// Closed-form parameter assignment; throws naming the violated constraint
/// when the normalization c is infeasible (x outside [0, 1/2] or any of
/// |gamma_hat|, |gamma_tilde|, |alpha_tilde| above 1).
TreeParams tree_params(double alpha, double beta, double gamma,
                       std::optional<double> c = std::nullopt);

/// Encoding of the parent-child edge pattern (entries 1/sqrt(2) at rows
/// 2j, 2j+1 of column j < 2^(n-1)): a cascade of adjacent inverse two-CNOT
/// swaps followed by H on the last wire. n+1 wires.
Circuit tree_edge_encoding(int n);

/// Diagonal encoding diag(gamma_hat, alpha_tilde x (2^(n-1)-1),
/// gamma_tilde x 2^(n-1)) on n+1 wires; theta2 == 0 elides the final
/// multi-controlled rotation.
Circuit tree_diag_encoding(int n, double theta0, double theta1, double theta2);

/// Adjacency matrix of the extended binary tree of depth n: heap-indexed
/// internal nodes with a root attached to node 1 and 2^(n-1) appended leaves.
ComplexMatrix tree_adjacency(int n, double alpha, double beta, double gamma);

/// Block-encoding of tree_adjacency(n,...)/c with exactly 3 ancilla wires.
BlockEncoding tree_be(int n, double alpha, double beta, double gamma,
                      std::optional<double> c = std::nullopt);

}  // namespace beprod
