#pragma once

#include "beprod/block_encoding.hpp"
#include "beprod/perm.hpp"

namespace beprod {

/// Kronecker product encoding on b+c wires: the tensored circuits conjugated
/// by row/column gathers. Subnormalization multiplies.
BlockEncoding kron_be(const BlockEncoding& ub, const BlockEncoding& uc);

/// Qubit-efficient Kronecker product: one flag wire plus shared ancillas,
/// max(b+t, c+s) + 1 wires total, where 2^s and 2^t are the smallest square
/// power-of-two blocks containing the two targets.
BlockEncoding kron_be_qe(const BlockEncoding& ub, const BlockEncoding& uc);

/// Standard matrix-product construction on b+c-s wires; targets must be
/// square with power-of-two dimension 2^s.
BlockEncoding matmul_be_standard(const BlockEncoding& ub, const BlockEncoding& uc);

/// Qubit-efficient matrix product on max(b,c)+1 wires (max(b,c) when the
/// inner dimension fills one encoding).
BlockEncoding matmul_be_qe(const BlockEncoding& ub, const BlockEncoding& uc);

/// Multiplication-order plan for a product chain of square 2^s targets.
struct ChainPlan {
    std::vector<int> dims;  // widths a_i of the input encodings
    int system = 0;         // s

    // cost[i][j] / split[i][j] over 0-based inclusive intervals [i, j]
    std::vector<std::vector<int>> cost;
    std::vector<std::vector<std::size_t>> split;

    std::size_t size() const { return dims.size(); }
    int predicted_qubits(std::size_t i, std::size_t j) const { return cost[i][j]; }
    int root_qubits() const { return cost.front().back(); }
    std::string tree_string() const;
};

/// Exact dynamic program over m_ij = min_r max(m_ir, m_{r+1,j}) + 1, ties
/// broken toward the most balanced split, then the smallest split point.
ChainPlan chain_plan(const std::vector<int>& widths, int system);

/// Folds matmul_be_qe over the plan tree; resulting width equals the plan's
/// root cost and the block is the left-to-right product A_1 A_2 ... A_n.
BlockEncoding chain_be(const ChainPlan& plan, const std::vector<BlockEncoding>& encodings);

/// Hadamard (entrywise) product on b+c wires with exactly
/// ceil(log2 M) + ceil(log2 N) CNOTs of overhead.
BlockEncoding hadamard_be(const BlockEncoding& ub, const BlockEncoding& uc);

/// Circular convolution circuit on 2n wires. Postselect the first register
/// on |0...0>; the second register then holds the convolution.
struct ConvolutionGadget {
    Circuit circuit;
    int n = 0;  // wires per register

    std::vector<int> postselect_wires() const;
};

ConvolutionGadget convolution_circuit(int n);

struct ConvolutionRun {
    std::vector<cplx> amplitudes;  // unnormalized post-measurement register 2
    double success_probability = 0.0;
};

/// Applies the gadget to psi (x) phi and projects register 1 onto zero.
ConvolutionRun run_convolution(const ConvolutionGadget& g, const std::vector<cplx>& psi,
                               const std::vector<cplx>& phi);

/// Column-stacking encoding: (M*N) x 1 target on ceil(log2 N) + a wires with
/// alpha_out = alpha * sqrt(2^r).
BlockEncoding vectorization_be(const BlockEncoding& ua);

}  // namespace beprod
