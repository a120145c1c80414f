#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "beprod/complex_matrix.hpp"

namespace beprod {

enum class GateKind { X, Z, H, Ry, Phase, CNOT, Swap, ControlledPhase, AddConst, Oracle };

std::string kind_name(GateKind k);
GateKind kind_from_name(const std::string& name);

struct Control {
    int wire = 0;
    bool positive = true;  // positive: fires on |1>, negative: fires on |0>
    bool operator==(const Control&) const = default;
};

/// One gate. Wire 0 is the most significant basis bit everywhere. For
/// AddConst and Oracle, targets[0] is the most significant wire of the
/// operand register.
struct Gate {
    GateKind kind = GateKind::X;
    std::vector<int> targets;
    std::vector<Control> controls;
    double theta = 0.0;           // Ry, Phase, ControlledPhase
    int width = 0;                // AddConst
    std::uint64_t addend = 0;     // AddConst, reduced mod 2^width
    std::string label;            // Oracle
    std::shared_ptr<const ComplexMatrix> matrix;  // Oracle, unitary, dim 2^|targets|

    static Gate x(int wire);
    static Gate z(int wire);
    static Gate h(int wire);
    static Gate ry(int wire, double theta);
    static Gate phase(int wire, double theta);
    static Gate cnot(int ctrl, int tgt);
    static Gate swap(int a, int b);
    static Gate controlled_phase(int ctrl, int tgt, double theta);
    static Gate add_const(std::vector<int> targets, std::uint64_t addend);
    static Gate oracle(std::string label, ComplexMatrix u, std::vector<int> targets);

    Gate with_controls(std::vector<Control> extra) const;
    Gate adjoint() const;
    Gate conjugate() const;

    bool operator==(const Gate& o) const;
};

struct Circuit {
    int n_wires = 0;
    std::vector<Gate> gates;
    std::vector<std::string> labels;  // optional per-wire register annotations

    Circuit() = default;
    explicit Circuit(int n) : n_wires(n) {
        if (n <= 0) throw std::invalid_argument("Circuit: n_wires must be positive");
    }

    Circuit& add(Gate g);  // validates wires, returns *this for chaining

    bool operator==(const Circuit& o) const;
};

void validate_gate(const Gate& g, int n_wires);

Circuit append(Circuit c, Gate g);

/// Gates of c1 followed by gates of c2: unitary_of(result) = U2 * U1.
Circuit compose(const Circuit& c1, const Circuit& c2);

Circuit adjoint(const Circuit& c);

/// Entrywise complex conjugate of the realized unitary.
Circuit conjugate(const Circuit& c);

/// Remap circuit wires: wire i of c becomes target_wires[i] in an n_total
/// wire circuit; untouched wires act as identity.
Circuit embed(const Circuit& c, const std::vector<int>& target_wires, int n_total);

/// Every gate of c gains the given controls (controlled version of the
/// whole circuit).
Circuit controlled(const Circuit& c, const std::vector<Control>& controls);

int gate_count(const Circuit& c, const std::function<bool(const Gate&)>& predicate);
int gate_count(const Circuit& c);
int gate_count_kind(const Circuit& c, GateKind k);
int qubit_count(const Circuit& c);

/// True for a plain CNOT or an X with exactly one control.
bool is_cnot_like(const Gate& g);

/// Estimated elementary-gate cost: structured gates and multi-controlled
/// gates are priced linearly in register width / control count.
std::int64_t elementary_cost_estimate(const Gate& g);
std::int64_t elementary_cost_estimate(const Circuit& c);

/// Permutation matrix with P|i> = |(i+d) mod 2^w>.
ComplexMatrix add_const_semantics(int w, std::uint64_t d);

/// Ancilla-free lowering of AddConst(w, d) to H and phase rotations in the
/// Fourier basis. O(w^2) gates.
Circuit decompose_add_const(int w, std::uint64_t d);

/// Replace every AddConst gate by its lowering (controls carried over).
Circuit lower_add_consts(const Circuit& c);

}  // namespace beprod
