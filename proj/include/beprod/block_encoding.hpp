#pragma once

#include <optional>
#include <string>

#include "beprod/circuit.hpp"
#include "beprod/complex_matrix.hpp"
#include "beprod/simulate.hpp"

namespace beprod {

/// A circuit whose leading rows x cols block, times alpha, is the encoded
/// matrix.
struct BlockEncoding {
    Circuit circuit;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double alpha = 1.0;
    int total_qubits = 0;

    void validate() const;
};

BlockEncoding make_encoding(Circuit c, std::size_t rows, std::size_t cols, double alpha);

enum class VerifyStatus { pass, fail, skipped };

struct VerifyResult {
    VerifyStatus status = VerifyStatus::skipped;
    double max_deviation = 0.0;
    std::string note;
};

/// Recomputes the circuit unitary, extracts the leading block, and compares
/// alpha * block against the target. Widths above max_wires are skipped.
VerifyResult verify_encoding(const BlockEncoding& be, const ComplexMatrix& target,
                             const Tolerance& tol = Tolerance(),
                             int max_wires = kDefaultMaxVerifyWires);

/// alpha * top_left_block(unitary_of(circuit)).
ComplexMatrix extract_block(const BlockEncoding& be, int max_wires = kDefaultMaxVerifyWires);

/// Widen by adding identity wires on top; the leading block is unchanged.
BlockEncoding pad_encoding(const BlockEncoding& be, int new_width);

/// Encodes the adjoint of the encoded matrix.
BlockEncoding adjoint_encoding(const BlockEncoding& be);

/// Encodes the entrywise conjugate of the encoded matrix.
BlockEncoding conjugate_encoding(const BlockEncoding& be);

/// Encodes the transpose (adjoint of the conjugate circuit).
BlockEncoding transpose_encoding(const BlockEncoding& be);

/// Unitary completion of a (spectral norm <= 1) matrix with the matrix as
/// its leading block, embedded in the next power-of-two dimension with an
/// identity tail. The circuit is a single opaque oracle gate.
BlockEncoding halmos_dilation(const ComplexMatrix& a, const std::string& label = "U",
                              const Tolerance& tol = Tolerance());

/// The dense completion [[A, S_r],[S_c, -A^dagger]] padded to the next power
/// of two. Exposed for tests.
ComplexMatrix halmos_dilation_matrix(const ComplexMatrix& a, const Tolerance& tol = Tolerance());

}  // namespace beprod
