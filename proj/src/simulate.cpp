#include "beprod/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace beprod {

namespace {

// Wire w holds bit (n-1-w) of the basis index.
inline std::size_t wire_mask(int n_wires, int wire) {
    return std::size_t{1} << (n_wires - 1 - wire);
}

inline bool controls_satisfied(const Gate& g, int n_wires, std::size_t idx) {
    for (const Control& c : g.controls) {
        const bool bit = (idx & wire_mask(n_wires, c.wire)) != 0;
        if (bit != c.positive) return false;
    }
    return true;
}

// Applies a 2x2 matrix to the target wire on every index pair passing the
// controls.
void apply_one_qubit(const Gate& g, int n_wires, std::vector<cplx>& state, const cplx m[2][2]) {
    const std::size_t mask = wire_mask(n_wires, g.targets[0]);
    const std::size_t dim = state.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        if (!controls_satisfied(g, n_wires, i)) continue;
        const std::size_t j = i | mask;
        const cplx a = state[i];
        const cplx b = state[j];
        state[i] = m[0][0] * a + m[0][1] * b;
        state[j] = m[1][0] * a + m[1][1] * b;
    }
}

// Permutes basis states: idx -> perm(idx) for indices passing the controls.
template <typename PermFn>
void apply_permutation(const Gate& g, int n_wires, std::vector<cplx>& state, PermFn perm) {
    const std::size_t dim = state.size();
    std::vector<cplx> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (!controls_satisfied(g, n_wires, i)) {
            out[i] += state[i];
            continue;
        }
        out[perm(i)] += state[i];
    }
    state.swap(out);
}

std::uint64_t read_register(int n_wires, const std::vector<int>& wires, std::size_t idx) {
    std::uint64_t v = 0;
    for (int w : wires) v = (v << 1) | ((idx & wire_mask(n_wires, w)) != 0 ? 1 : 0);
    return v;
}

std::size_t write_register(int n_wires, const std::vector<int>& wires, std::size_t idx,
                           std::uint64_t v) {
    const int k = static_cast<int>(wires.size());
    for (int p = 0; p < k; ++p) {
        const std::size_t mask = wire_mask(n_wires, wires[static_cast<std::size_t>(p)]);
        const bool bit = (v >> (k - 1 - p)) & 1;
        idx = bit ? (idx | mask) : (idx & ~mask);
    }
    return idx;
}

void apply_oracle(const Gate& g, int n_wires, std::vector<cplx>& state) {
    const int k = static_cast<int>(g.targets.size());
    const std::size_t sub = std::size_t{1} << k;
    const ComplexMatrix& u = *g.matrix;
    const std::size_t dim = state.size();
    std::vector<cplx> in(sub), out(sub);
    std::vector<bool> done(dim, false);
    for (std::size_t base = 0; base < dim; ++base) {
        if (done[base]) continue;
        if (read_register(n_wires, g.targets, base) != 0) continue;
        if (!controls_satisfied(g, n_wires, base)) {
            done[base] = true;
            continue;
        }
        for (std::uint64_t v = 0; v < sub; ++v) {
            const std::size_t idx = write_register(n_wires, g.targets, base, v);
            in[v] = state[idx];
            done[idx] = true;
        }
        for (std::size_t r = 0; r < sub; ++r) {
            cplx s = 0.0;
            for (std::size_t c = 0; c < sub; ++c) s += u.at(r, c) * in[c];
            out[r] = s;
        }
        for (std::uint64_t v = 0; v < sub; ++v) {
            state[write_register(n_wires, g.targets, base, v)] = out[v];
        }
    }
}

}  // namespace

void apply_gate(const Gate& g, int n_wires, std::vector<cplx>& state) {
    if (state.size() != (std::size_t{1} << n_wires)) {
        throw std::invalid_argument("apply_gate: state length != 2^n_wires");
    }
    validate_gate(g, n_wires);
    switch (g.kind) {
        case GateKind::X:
        case GateKind::CNOT: {
            const std::size_t mask = wire_mask(n_wires, g.targets[0]);
            apply_permutation(g, n_wires, state, [mask](std::size_t i) { return i ^ mask; });
            break;
        }
        case GateKind::Z: {
            const std::size_t mask = wire_mask(n_wires, g.targets[0]);
            for (std::size_t i = 0; i < state.size(); ++i) {
                if ((i & mask) && controls_satisfied(g, n_wires, i)) state[i] = -state[i];
            }
            break;
        }
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            const cplx m[2][2] = {{r, r}, {r, -r}};
            apply_one_qubit(g, n_wires, state, m);
            break;
        }
        case GateKind::Ry: {
            const double c = std::cos(g.theta / 2.0), s = std::sin(g.theta / 2.0);
            const cplx m[2][2] = {{c, -s}, {s, c}};
            apply_one_qubit(g, n_wires, state, m);
            break;
        }
        case GateKind::Phase:
        case GateKind::ControlledPhase: {
            const cplx ph = std::polar(1.0, g.theta);
            const std::size_t mask = wire_mask(n_wires, g.targets[0]);
            for (std::size_t i = 0; i < state.size(); ++i) {
                if ((i & mask) && controls_satisfied(g, n_wires, i)) state[i] *= ph;
            }
            break;
        }
        case GateKind::Swap: {
            const std::size_t m0 = wire_mask(n_wires, g.targets[0]);
            const std::size_t m1 = wire_mask(n_wires, g.targets[1]);
            apply_permutation(g, n_wires, state, [m0, m1](std::size_t i) {
                const bool b0 = i & m0, b1 = i & m1;
                if (b0 == b1) return i;
                return i ^ m0 ^ m1;
            });
            break;
        }
        case GateKind::AddConst: {
            const std::uint64_t mod = std::uint64_t{1} << g.width;
            apply_permutation(g, n_wires, state, [&](std::size_t i) {
                const std::uint64_t v = read_register(n_wires, g.targets, i);
                return write_register(n_wires, g.targets, i, (v + g.addend) & (mod - 1));
            });
            break;
        }
        case GateKind::Oracle:
            apply_oracle(g, n_wires, state);
            break;
    }
}

void apply_circuit(const Circuit& c, std::vector<cplx>& state) {
    for (const Gate& g : c.gates) apply_gate(g, c.n_wires, state);
}

ComplexMatrix unitary_of(const Circuit& c, int max_wires) {
    if (c.n_wires > max_wires) {
        throw std::invalid_argument("unitary_of: circuit has " + std::to_string(c.n_wires) +
                                    " wires, cap is " + std::to_string(max_wires));
    }
    const std::size_t dim = std::size_t{1} << c.n_wires;
    ComplexMatrix u(dim, dim);
    std::vector<cplx> col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::fill(col.begin(), col.end(), cplx(0.0));
        col[j] = 1.0;
        apply_circuit(c, col);
        for (std::size_t i = 0; i < dim; ++i) u.at(i, j) = col[i];
    }
    return u;
}

}  // namespace beprod
