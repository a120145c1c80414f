#include "beprod/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace beprod {

std::string kind_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::Ry: return "Ry";
        case GateKind::Phase: return "Phase";
        case GateKind::CNOT: return "CNOT";
        case GateKind::Swap: return "Swap";
        case GateKind::ControlledPhase: return "ControlledPhase";
        case GateKind::AddConst: return "AddConst";
        case GateKind::Oracle: return "Oracle";
    }
    throw std::logic_error("kind_name: bad kind");
}

GateKind kind_from_name(const std::string& name) {
    static const std::vector<std::pair<std::string, GateKind>> table = {
        {"X", GateKind::X}, {"Z", GateKind::Z}, {"H", GateKind::H}, {"Ry", GateKind::Ry},
        {"Phase", GateKind::Phase}, {"CNOT", GateKind::CNOT}, {"Swap", GateKind::Swap},
        {"ControlledPhase", GateKind::ControlledPhase}, {"AddConst", GateKind::AddConst},
        {"Oracle", GateKind::Oracle}};
    for (const auto& [n, k] : table)
        if (n == name) return k;
    throw std::invalid_argument("unknown gate kind: " + name);
}

Gate Gate::x(int wire) { Gate g; g.kind = GateKind::X; g.targets = {wire}; return g; }
Gate Gate::z(int wire) { Gate g; g.kind = GateKind::Z; g.targets = {wire}; return g; }
Gate Gate::h(int wire) { Gate g; g.kind = GateKind::H; g.targets = {wire}; return g; }

Gate Gate::ry(int wire, double theta) {
    Gate g; g.kind = GateKind::Ry; g.targets = {wire}; g.theta = theta; return g;
}

Gate Gate::phase(int wire, double theta) {
    Gate g; g.kind = GateKind::Phase; g.targets = {wire}; g.theta = theta; return g;
}

Gate Gate::cnot(int ctrl, int tgt) {
    Gate g; g.kind = GateKind::CNOT; g.targets = {tgt}; g.controls = {{ctrl, true}}; return g;
}

Gate Gate::swap(int a, int b) { Gate g; g.kind = GateKind::Swap; g.targets = {a, b}; return g; }

Gate Gate::controlled_phase(int ctrl, int tgt, double theta) {
    Gate g;
    g.kind = GateKind::ControlledPhase;
    g.targets = {tgt};
    g.controls = {{ctrl, true}};
    g.theta = theta;
    return g;
}

Gate Gate::add_const(std::vector<int> targets, std::uint64_t addend) {
    Gate g;
    g.kind = GateKind::AddConst;
    g.width = static_cast<int>(targets.size());
    if (g.width < 1 || g.width > 63) throw std::invalid_argument("AddConst: bad width");
    g.targets = std::move(targets);
    g.addend = addend & ((std::uint64_t{1} << g.width) - 1);
    return g;
}

Gate Gate::oracle(std::string label, ComplexMatrix u, std::vector<int> targets) {
    Gate g;
    g.kind = GateKind::Oracle;
    const std::size_t dim = std::size_t{1} << targets.size();
    if (u.rows != dim || u.cols != dim) {
        throw std::invalid_argument("Oracle: matrix dimension != 2^|targets|");
    }
    if (unitarity_defect(u) > 1e-10) throw std::invalid_argument("Oracle: matrix not unitary");
    g.label = std::move(label);
    g.matrix = std::make_shared<const ComplexMatrix>(std::move(u));
    g.targets = std::move(targets);
    return g;
}

Gate Gate::with_controls(std::vector<Control> extra) const {
    Gate g = *this;
    g.controls.insert(g.controls.end(), extra.begin(), extra.end());
    return g;
}

static std::string toggle_dagger(const std::string& label) {
    const std::string dag = "\xE2\x80\xA0";  // dagger symbol
    if (label.size() >= dag.size() && label.compare(label.size() - dag.size(), dag.size(), dag) == 0) {
        return label.substr(0, label.size() - dag.size());
    }
    return label + dag;
}

Gate Gate::adjoint() const {
    Gate g = *this;
    switch (kind) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::CNOT:
        case GateKind::Swap:
            break;
        case GateKind::Ry:
        case GateKind::Phase:
        case GateKind::ControlledPhase:
            g.theta = -theta;
            break;
        case GateKind::AddConst:
            g.addend = (-addend) & ((std::uint64_t{1} << width) - 1);
            break;
        case GateKind::Oracle:
            g.matrix = std::make_shared<const ComplexMatrix>(adjoint_ref(*matrix));
            g.label = toggle_dagger(label);
            break;
    }
    return g;
}

Gate Gate::conjugate() const {
    Gate g = *this;
    switch (kind) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::CNOT:
        case GateKind::Swap:
        case GateKind::Ry:
        case GateKind::AddConst:
            break;  // real matrices
        case GateKind::Phase:
        case GateKind::ControlledPhase:
            g.theta = -theta;
            break;
        case GateKind::Oracle:
            g.matrix = std::make_shared<const ComplexMatrix>(conjugate_ref(*matrix));
            break;
    }
    return g;
}

bool Gate::operator==(const Gate& o) const {
    if (kind != o.kind || targets != o.targets || controls != o.controls || theta != o.theta ||
        width != o.width || addend != o.addend || label != o.label) {
        return false;
    }
    if (static_cast<bool>(matrix) != static_cast<bool>(o.matrix)) return false;
    if (matrix && !(*matrix == *o.matrix)) return false;
    return true;
}

void validate_gate(const Gate& g, int n_wires) {
    std::set<int> seen;
    auto check = [&](int w) {
        if (w < 0 || w >= n_wires) {
            throw std::invalid_argument(kind_name(g.kind) + ": wire " + std::to_string(w) +
                                        " out of range for " + std::to_string(n_wires) + " wires");
        }
        if (!seen.insert(w).second) {
            throw std::invalid_argument(kind_name(g.kind) + ": wire " + std::to_string(w) +
                                        " used twice");
        }
    };
    for (int w : g.targets) check(w);
    for (const Control& c : g.controls) check(c.wire);
    switch (g.kind) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::Ry:
        case GateKind::Phase:
        case GateKind::CNOT:
        case GateKind::ControlledPhase:
            if (g.targets.size() != 1) throw std::invalid_argument("gate needs exactly one target");
            break;
        case GateKind::Swap:
            if (g.targets.size() != 2) throw std::invalid_argument("Swap needs two targets");
            break;
        case GateKind::AddConst:
            if (static_cast<int>(g.targets.size()) != g.width || g.width < 1) {
                throw std::invalid_argument("AddConst: targets must match width");
            }
            break;
        case GateKind::Oracle:
            if (!g.matrix) throw std::invalid_argument("Oracle: missing matrix");
            if (g.matrix->rows != (std::size_t{1} << g.targets.size())) {
                throw std::invalid_argument("Oracle: matrix dimension != 2^|targets|");
            }
            break;
    }
    if (g.kind == GateKind::CNOT || g.kind == GateKind::ControlledPhase) {
        if (g.controls.empty()) throw std::invalid_argument(kind_name(g.kind) + ": needs a control");
    }
}

Circuit& Circuit::add(Gate g) {
    validate_gate(g, n_wires);
    gates.push_back(std::move(g));
    return *this;
}

bool Circuit::operator==(const Circuit& o) const {
    return n_wires == o.n_wires && gates == o.gates && labels == o.labels;
}

Circuit append(Circuit c, Gate g) {
    c.add(std::move(g));
    return c;
}

Circuit compose(const Circuit& c1, const Circuit& c2) {
    if (c1.n_wires != c2.n_wires) {
        throw std::invalid_argument("compose: width mismatch " + std::to_string(c1.n_wires) +
                                    " vs " + std::to_string(c2.n_wires));
    }
    Circuit out = c1;
    out.gates.insert(out.gates.end(), c2.gates.begin(), c2.gates.end());
    return out;
}

Circuit adjoint(const Circuit& c) {
    Circuit out(c.n_wires);
    out.labels = c.labels;
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) out.gates.push_back(it->adjoint());
    return out;
}

Circuit conjugate(const Circuit& c) {
    Circuit out(c.n_wires);
    out.labels = c.labels;
    out.gates.reserve(c.gates.size());
    for (const Gate& g : c.gates) out.gates.push_back(g.conjugate());
    return out;
}

Circuit embed(const Circuit& c, const std::vector<int>& target_wires, int n_total) {
    if (static_cast<int>(target_wires.size()) != c.n_wires) {
        throw std::invalid_argument("embed: wire map size != circuit width");
    }
    std::set<int> seen;
    for (int w : target_wires) {
        if (w < 0 || w >= n_total) throw std::invalid_argument("embed: wire out of range");
        if (!seen.insert(w).second) throw std::invalid_argument("embed: wire map not injective");
    }
    Circuit out(n_total);
    out.gates.reserve(c.gates.size());
    for (const Gate& g : c.gates) {
        Gate m = g;
        for (int& w : m.targets) w = target_wires[static_cast<std::size_t>(w)];
        for (Control& ctl : m.controls) ctl.wire = target_wires[static_cast<std::size_t>(ctl.wire)];
        out.add(std::move(m));
    }
    return out;
}

Circuit controlled(const Circuit& c, const std::vector<Control>& controls) {
    Circuit out(c.n_wires);
    out.labels = c.labels;
    out.gates.reserve(c.gates.size());
    for (const Gate& g : c.gates) out.add(g.with_controls(controls));
    return out;
}

int gate_count(const Circuit& c, const std::function<bool(const Gate&)>& predicate) {
    int n = 0;
    for (const Gate& g : c.gates)
        if (predicate(g)) ++n;
    return n;
}

int gate_count(const Circuit& c) { return static_cast<int>(c.gates.size()); }

int gate_count_kind(const Circuit& c, GateKind k) {
    return gate_count(c, [k](const Gate& g) { return g.kind == k; });
}

int qubit_count(const Circuit& c) { return c.n_wires; }

bool is_cnot_like(const Gate& g) {
    if (g.kind == GateKind::CNOT) return true;
    return g.kind == GateKind::X && g.controls.size() == 1;
}

std::int64_t elementary_cost_estimate(const Gate& g) {
    const auto k = static_cast<std::int64_t>(g.controls.size());
    std::int64_t base = 1;
    switch (g.kind) {
        case GateKind::Swap:
            base = 3;
            break;
        case GateKind::AddConst:
            // Fourier-basis lowering: w H pairs plus w(w-1) controlled phases
            // plus w single phases.
            base = static_cast<std::int64_t>(g.width) * g.width + 2 * g.width;
            break;
        case GateKind::Oracle:
            base = 1;  // priced as one query
            break;
        default:
            base = 1;
            break;
    }
    // Multi-controlled gates cost linearly in the number of controls.
    const std::int64_t control_factor = k <= 1 ? 1 : 2 * k - 1;
    return base * control_factor;
}

std::int64_t elementary_cost_estimate(const Circuit& c) {
    std::int64_t total = 0;
    for (const Gate& g : c.gates) total += elementary_cost_estimate(g);
    return total;
}

ComplexMatrix add_const_semantics(int w, std::uint64_t d) {
    if (w < 0 || w > 14) throw std::invalid_argument("add_const_semantics: width out of range");
    const std::size_t n = std::size_t{1} << w;
    d &= n - 1;
    ComplexMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) p.at((i + d) & (n - 1), i) = 1.0;
    return p;
}

Circuit decompose_add_const(int w, std::uint64_t d) {
    if (w < 1) throw std::invalid_argument("decompose_add_const: width must be >= 1");
    Circuit c(w);
    d &= (std::uint64_t{1} << w) - 1;
    const double pi = std::numbers::pi;
    // Fourier transform without the wire reversal: wire j ends up carrying
    // the phase exp(2*pi*i * v / 2^(w-j)).
    for (int j = 0; j < w; ++j) {
        c.add(Gate::h(j));
        for (int k = j + 1; k < w; ++k) {
            c.add(Gate::controlled_phase(k, j, pi / static_cast<double>(1ULL << (k - j))));
        }
    }
    // Adding d multiplies wire j's |1> component by exp(2*pi*i*d / 2^(w-j)).
    for (int j = 0; j < w; ++j) {
        const std::uint64_t denom = std::uint64_t{1} << (w - j);
        const std::uint64_t rem = d & (denom - 1);
        if (rem == 0) continue;
        c.add(Gate::phase(j, 2.0 * pi * static_cast<double>(rem) / static_cast<double>(denom)));
    }
    for (int j = w - 1; j >= 0; --j) {
        for (int k = w - 1; k > j; --k) {
            c.add(Gate::controlled_phase(k, j, -pi / static_cast<double>(1ULL << (k - j))));
        }
        c.add(Gate::h(j));
    }
    return c;
}

Circuit lower_add_consts(const Circuit& c) {
    Circuit out(c.n_wires);
    out.labels = c.labels;
    for (const Gate& g : c.gates) {
        if (g.kind != GateKind::AddConst) {
            out.add(g);
            continue;
        }
        Circuit lowered = decompose_add_const(g.width, g.addend);
        Circuit placed = embed(lowered, g.targets, c.n_wires);
        for (const Gate& lg : placed.gates) out.add(lg.with_controls(g.controls));
    }
    return out;
}

}  // namespace beprod
