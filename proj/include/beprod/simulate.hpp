#pragma once

#include "beprod/circuit.hpp"
#include "beprod/complex_matrix.hpp"

namespace beprod {

inline constexpr int kDefaultMaxVerifyWires = 14;

/// Applies one gate in place to a state of length 2^n_wires.
void apply_gate(const Gate& g, int n_wires, std::vector<cplx>& state);

/// Applies the circuit's gates in order to the state.
void apply_circuit(const Circuit& c, std::vector<cplx>& state);

/// The 2^n x 2^n unitary realized by applying c's gates in order; wire 0 is
/// the most significant bit of the basis index. Capped at max_wires.
ComplexMatrix unitary_of(const Circuit& c, int max_wires = kDefaultMaxVerifyWires);

}  // namespace beprod
