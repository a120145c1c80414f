#pragma once

#include "beprod/circuit.hpp"

namespace beprod {

/// Payload-gathering problem: 2^d stacked blocks of 2^s entries, each with
/// an M-entry payload on top.
struct GatherSpec {
    int s = 1;           // qubits per block
    int d = 1;           // log2 of block count
    std::uint64_t m = 1; // payload entries per block, 1 <= m <= 2^s

    void validate() const;
};

/// Two-CNOT replacement for a SWAP on inputs whose low wire is |0>: maps
/// |00>->|00>, |10>->|01>, |01>->|11>, |11>->|10>.
Circuit two_cnot_swap(int hi, int lo, int n_wires);

/// Gather permutation on d+s wires: stacks the M-entry payloads of all 2^d
/// blocks contiguously at the top. One layer per block-doubling; power-of-two
/// payloads cost 2 CNOTs per layer, other sizes use cyclic-shift AddConst
/// factors.
Circuit gather_perm(const GatherSpec& spec);

/// Index map realized by gather_perm on payload inputs; junk rows complete
/// the permutation. Exposed as the test oracle's ground truth companion.
std::vector<std::size_t> gather_perm_index_map(const GatherSpec& spec);

/// Conjugates `inner` with row/column gathers: result = Pi_row * U * Pi_col^dagger.
Circuit block_gather(const GatherSpec& row_spec, const GatherSpec& col_spec, const Circuit& inner);

/// Block permutation on t wires (wire 0 and the last c wires) isolating the
/// first K columns' payload under the |0> flag. K = 2^k specializes to an X
/// plus one negatively-controlled X.
Circuit product_perm(int c, std::uint64_t k_payload, int t);

/// Ground-truth index map of product_perm restricted to its c+1 active wires.
std::vector<std::size_t> product_perm_index_map(int c, std::uint64_t k_payload);

/// r CNOTs copying the low r wires of the c-register onto the b-register:
/// |0>_b |j>_c -> |j>_b |j>_c for j < 2^r.
Circuit copy_perm(int b, int c, int r);

/// Quantum Fourier transform with final wire reversal: entry (j,k) equals
/// omega^{jk} / sqrt(2^n).
Circuit qft_circuit(int n);

}  // namespace beprod
