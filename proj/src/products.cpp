#include "beprod/products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace beprod {

namespace {

int ceil_log2(std::uint64_t v) {
    int t = 0;
    while ((std::uint64_t{1} << t) < v) ++t;
    return t;
}

std::vector<int> wire_range(int from, int to) {
    std::vector<int> w;
    for (int i = from; i < to; ++i) w.push_back(i);
    return w;
}

Circuit place(const Circuit& c, int first_wire, int n_total) {
    return embed(c, wire_range(first_wire, first_wire + c.n_wires), n_total);
}

}  // namespace

BlockEncoding kron_be(const BlockEncoding& ub, const BlockEncoding& uc) {
    ub.validate();
    uc.validate();
    const int b = ub.total_qubits, c = uc.total_qubits;
    const int total = b + c;
    const int d1 = ceil_log2(ub.rows);
    const int d2 = ceil_log2(ub.cols);

    Circuit circ(total);
    // Column gather (adjoint) ahead of the tensored encodings, row gather after.
    if (d2 > 0) {
        Circuit col = gather_perm({c, d2, uc.cols});
        circ = compose(circ, place(adjoint(col), b - d2, total));
    }
    circ = compose(circ, place(ub.circuit, 0, total));
    circ = compose(circ, place(uc.circuit, b, total));
    if (d1 > 0) {
        Circuit row = gather_perm({c, d1, uc.rows});
        circ = compose(circ, place(row, b - d1, total));
    }
    return make_encoding(std::move(circ), ub.rows * uc.rows, ub.cols * uc.cols,
                         ub.alpha * uc.alpha);
}

BlockEncoding kron_be_qe(const BlockEncoding& ub, const BlockEncoding& uc) {
    ub.validate();
    uc.validate();
    const int b = ub.total_qubits, c = uc.total_qubits;
    const int s = std::max(ceil_log2(ub.rows), ceil_log2(ub.cols));
    const int t = std::max(ceil_log2(uc.rows), ceil_log2(uc.cols));

    const bool c_side_wider = (c - t) >= (b - s);
    const int shared = std::max(b - s, c - t);
    const int extra = std::abs((c - t) - (b - s));
    const int total = 1 + shared + s + t;  // == max(b+t, c+s) + 1

    const int x0 = 1 + shared;   // first wire of the s-register
    const int y0 = x0 + s;       // first wire of the t-register
    Circuit circ(total);

    std::vector<int> first_anc, second_anc;  // ancilla wires of phase 1 and 3
    if (c_side_wider) {
        first_anc = wire_range(1 + extra, 1 + shared);          // U_B ancillas
        second_anc = wire_range(1, 1 + shared);                 // U_C ancillas
    } else {
        first_anc = wire_range(1 + extra, 1 + shared);          // U_C ancillas
        second_anc = wire_range(1, 1 + shared);                 // U_B ancillas
    }

    auto embed_encoding = [&](const Circuit& enc, const std::vector<int>& anc, int sys_first,
                              int sys_count) {
        std::vector<int> map = anc;
        for (int w : wire_range(sys_first, sys_first + sys_count)) map.push_back(w);
        return embed(enc, map, total);
    };

    if (c_side_wider) {
        circ = compose(circ, embed_encoding(ub.circuit, first_anc, x0, s));
    } else {
        circ = compose(circ, embed_encoding(uc.circuit, first_anc, y0, t));
    }
    circ.add(Gate::x(0));
    std::vector<Control> pads;
    for (int w : first_anc) pads.push_back({w, false});
    circ.add(Gate::x(0).with_controls(pads));
    if (c_side_wider) {
        circ = compose(circ, embed_encoding(uc.circuit, second_anc, y0, t));
    } else {
        circ = compose(circ, embed_encoding(ub.circuit, second_anc, x0, s));
    }

    // General sizes: gather the payload grid of the embedded square blocks.
    const int d1 = ceil_log2(ub.rows);
    const int d2 = ceil_log2(ub.cols);
    const bool row_trivial = (d1 == 0 || uc.rows == (std::size_t{1} << t)) && d1 <= s;
    const bool col_trivial = (d2 == 0 || uc.cols == (std::size_t{1} << t)) && d2 <= s;
    Circuit out(total);
    if (!col_trivial) {
        Circuit col = gather_perm({t, d2, uc.cols});
        out = compose(out, place(adjoint(col), total - t - d2, total));
    }
    out = compose(out, circ);
    if (!row_trivial) {
        Circuit row = gather_perm({t, d1, uc.rows});
        out = compose(out, place(row, total - t - d1, total));
    }
    return make_encoding(std::move(out), ub.rows * uc.rows, ub.cols * uc.cols,
                         ub.alpha * uc.alpha);
}

BlockEncoding matmul_be_standard(const BlockEncoding& ub, const BlockEncoding& uc) {
    ub.validate();
    uc.validate();
    if (ub.rows != ub.cols || uc.rows != uc.cols || ub.rows != uc.rows) {
        throw std::invalid_argument("matmul_be_standard: targets must be square and equal size");
    }
    const std::size_t dim = ub.rows;
    if ((dim & (dim - 1)) != 0) {
        throw std::invalid_argument("matmul_be_standard: dimension must be a power of two");
    }
    const int s = ceil_log2(dim);
    const int b = ub.total_qubits, c = uc.total_qubits;
    const int total = b + c - s;
    Circuit circ(total);
    circ = compose(circ, place(uc.circuit, b - s, total));
    std::vector<int> bmap = wire_range(0, b - s);
    for (int w : wire_range(total - s, total)) bmap.push_back(w);
    circ = compose(circ, embed(ub.circuit, bmap, total));
    return make_encoding(std::move(circ), dim, dim, ub.alpha * uc.alpha);
}

BlockEncoding matmul_be_qe(const BlockEncoding& ub, const BlockEncoding& uc) {
    ub.validate();
    uc.validate();
    if (ub.cols != uc.rows) {
        throw std::invalid_argument("matmul_be_qe: inner dimensions " + std::to_string(ub.cols) +
                                    " vs " + std::to_string(uc.rows));
    }
    const std::size_t k = ub.cols;
    const int b = ub.total_qubits, c = uc.total_qubits;
    const double alpha = ub.alpha * uc.alpha;

    if (k == (std::size_t{1} << c)) {
        // C fills its encoding's rows: compose directly on max(b, c) wires.
        const int total = b;  // k <= 2^b forces b >= c here
        Circuit circ(total);
        circ = compose(circ, place(uc.circuit, b - c, total));
        circ = compose(circ, place(ub.circuit, 0, total));
        return make_encoding(std::move(circ), ub.rows, uc.cols, alpha);
    }
    if (k == (std::size_t{1} << b)) {
        const int total = c;  // b <= c here
        Circuit circ(total);
        circ = compose(circ, place(uc.circuit, 0, total));
        circ = compose(circ, place(ub.circuit, c - b, total));
        return make_encoding(std::move(circ), ub.rows, uc.cols, alpha);
    }
    if (b < c) {
        // Build the adjoint product C^dagger B^dagger on the wider side and
        // invert the circuit.
        return adjoint_encoding(matmul_be_qe(adjoint_encoding(uc), adjoint_encoding(ub)));
    }
    const int t = b + 1;
    Circuit circ(t);
    circ = compose(circ, place(uc.circuit, t - c, t));
    circ = compose(circ, product_perm(c, k, t));
    circ = compose(circ, place(ub.circuit, 1, t));
    return make_encoding(std::move(circ), ub.rows, uc.cols, alpha);
}

std::string ChainPlan::tree_string() const {
    std::function<void(std::size_t, std::size_t, std::ostringstream&)> emit =
        [&](std::size_t i, std::size_t j, std::ostringstream& os) {
            if (i == j) {
                os << (i + 1);
                return;
            }
            os << "(";
            emit(i, split[i][j], os);
            os << "*";
            emit(split[i][j] + 1, j, os);
            os << ")";
        };
    std::ostringstream os;
    emit(0, dims.size() - 1, os);
    return os.str();
}

ChainPlan chain_plan(const std::vector<int>& widths, int system) {
    if (widths.empty()) throw std::invalid_argument("chain_plan: empty width list");
    for (int a : widths) {
        if (a <= system) {
            throw std::invalid_argument("chain_plan: every width must exceed the system size");
        }
    }
    const std::size_t n = widths.size();
    ChainPlan plan;
    plan.dims = widths;
    plan.system = system;
    plan.cost.assign(n, std::vector<int>(n, 0));
    plan.split.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) plan.cost[i][i] = widths[i];
    for (std::size_t len = 2; len <= n; ++len) {
        for (std::size_t i = 0; i + len <= n; ++i) {
            const std::size_t j = i + len - 1;
            int best = std::numeric_limits<int>::max();
            long best_imbalance = 0;
            std::size_t best_r = i;
            for (std::size_t r = i; r < j; ++r) {
                const int cand = std::max(plan.cost[i][r], plan.cost[r + 1][j]) + 1;
                const long imbalance =
                    std::labs(static_cast<long>(r - i) - static_cast<long>(j - r - 1));
                if (cand < best || (cand == best && imbalance < best_imbalance)) {
                    best = cand;
                    best_imbalance = imbalance;
                    best_r = r;
                }
            }
            plan.cost[i][j] = best;
            plan.split[i][j] = best_r;
        }
    }
    return plan;
}

namespace {

BlockEncoding chain_fold(const ChainPlan& plan, const std::vector<BlockEncoding>& encodings,
                         std::size_t i, std::size_t j) {
    if (i == j) return encodings[i];
    const std::size_t r = plan.split[i][j];
    BlockEncoding left = chain_fold(plan, encodings, i, r);
    BlockEncoding right = chain_fold(plan, encodings, r + 1, j);
    BlockEncoding prod = matmul_be_qe(left, right);
    if (prod.total_qubits != plan.cost[i][j]) {
        throw std::logic_error("chain_be: realized width " + std::to_string(prod.total_qubits) +
                               " disagrees with plan cost " + std::to_string(plan.cost[i][j]));
    }
    return prod;
}

}  // namespace

BlockEncoding chain_be(const ChainPlan& plan, const std::vector<BlockEncoding>& encodings) {
    if (encodings.size() != plan.size()) {
        throw std::invalid_argument("chain_be: plan and encoding counts differ");
    }
    const std::size_t dim = std::size_t{1} << plan.system;
    for (std::size_t i = 0; i < encodings.size(); ++i) {
        encodings[i].validate();
        if (encodings[i].rows != dim || encodings[i].cols != dim) {
            throw std::invalid_argument("chain_be: target " + std::to_string(i + 1) +
                                        " is not square of dimension 2^system");
        }
        if (encodings[i].total_qubits != plan.dims[i]) {
            throw std::invalid_argument("chain_be: encoding width disagrees with plan");
        }
    }
    return chain_fold(plan, encodings, 0, plan.size() - 1);
}

BlockEncoding hadamard_be(const BlockEncoding& ub, const BlockEncoding& uc) {
    ub.validate();
    uc.validate();
    if (ub.rows != uc.rows || ub.cols != uc.cols) {
        throw std::invalid_argument("hadamard_be: target shapes differ");
    }
    const int b = ub.total_qubits, c = uc.total_qubits;
    const int l = ceil_log2(ub.rows);
    const int r = ceil_log2(ub.cols);
    if (r > std::min(b, c) || l > std::min(b, c)) {
        throw std::invalid_argument("hadamard_be: target too large for the encodings");
    }
    const int total = b + c;
    Circuit circ(total);
    circ = compose(circ, copy_perm(b, c, r));
    circ = compose(circ, place(ub.circuit, 0, total));
    circ = compose(circ, place(uc.circuit, b, total));
    circ = compose(circ, adjoint(copy_perm(b, c, l)));
    return make_encoding(std::move(circ), ub.rows, ub.cols, ub.alpha * uc.alpha);
}

std::vector<int> ConvolutionGadget::postselect_wires() const {
    std::vector<int> w;
    for (int i = 0; i < n; ++i) w.push_back(i);
    return w;
}

ConvolutionGadget convolution_circuit(int n) {
    if (n < 1 || n > 7) {
        throw std::invalid_argument("convolution_circuit: n out of range [1, 7]");
    }
    ConvolutionGadget g;
    g.n = n;
    Circuit circ(2 * n);
    circ = compose(circ, place(qft_circuit(n), 0, 2 * n));
    circ = compose(circ, place(qft_circuit(n), n, 2 * n));
    // Fourier-domain entrywise product: controls on the second register,
    // targets on the first.
    for (int k = 0; k < n; ++k) circ.add(Gate::cnot(n + k, k));
    circ = compose(circ, place(adjoint(qft_circuit(n)), n, 2 * n));
    g.circuit = std::move(circ);
    return g;
}

ConvolutionRun run_convolution(const ConvolutionGadget& g, const std::vector<cplx>& psi,
                               const std::vector<cplx>& phi) {
    const std::size_t dim = std::size_t{1} << g.n;
    if (psi.size() != dim || phi.size() != dim) {
        throw std::invalid_argument("run_convolution: state length != 2^n");
    }
    std::vector<cplx> state(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) state[i * dim + j] = psi[i] * phi[j];
    apply_circuit(g.circuit, state);
    ConvolutionRun run;
    run.amplitudes.assign(state.begin(), state.begin() + static_cast<std::ptrdiff_t>(dim));
    for (const cplx& z : run.amplitudes) run.success_probability += std::norm(z);
    return run;
}

BlockEncoding vectorization_be(const BlockEncoding& ua) {
    ua.validate();
    const int a = ua.total_qubits;
    const int r = ceil_log2(ua.cols);
    const int total = r + a;
    Circuit circ(total);
    for (int i = 0; i < r; ++i) circ.add(Gate::h(a + i));
    for (int i = 0; i < r; ++i) circ.add(Gate::cnot(a + i, i));
    circ = compose(circ, place(ua.circuit, r, total));
    circ = compose(circ, gather_perm({a, r, ua.rows}));
    return make_encoding(std::move(circ), ua.rows * ua.cols, 1,
                         ua.alpha * std::sqrt(static_cast<double>(std::size_t{1} << r)));
}

}  // namespace beprod
