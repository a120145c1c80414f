#include "beprod/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
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

}  // namespace

std::vector<std::string> GadgetLayout::wire_labels() const {
    std::vector<std::string> labels;
    for (int i = 0; i < n_c; ++i) labels.push_back("c");
    for (int i = 0; i < n_b; ++i) labels.push_back("b");
    for (int i = 0; i < n_a; ++i) labels.push_back("a");
    for (int i = 0; i < n_s; ++i) labels.push_back("s");
    return labels;
}

void GadgetLayout::validate() const {
    if (n_b < 1 || n_a < 0 || n_s < 1 || n_c < 0) {
        throw std::invalid_argument("GadgetLayout: bad register widths");
    }
    if (num_oracles < 1) throw std::invalid_argument("GadgetLayout: need at least one oracle");
}

GadgetLayout gadget_layout(std::size_t num_oracles, int n_a, int n_s) {
    GadgetLayout l;
    l.num_oracles = num_oracles;
    l.n_c = ceil_log2(num_oracles);
    l.n_b = l.n_c + 1;
    l.n_a = n_a;
    l.n_s = n_s;
    l.validate();
    return l;
}

namespace {

void check_oracles(const std::vector<BlockEncoding>& oracles, const GadgetLayout& layout) {
    const std::size_t dim = std::size_t{1} << layout.n_s;
    for (const BlockEncoding& o : oracles) {
        o.validate();
        if (o.total_qubits != layout.n_a + layout.n_s) {
            throw std::invalid_argument("compression: oracle width != n_a + n_s");
        }
        if (o.rows != dim || o.cols != dim) {
            throw std::invalid_argument("compression: oracle target must be square 2^n_s");
        }
    }
}

// Emits T_{p,q} (1-based oracle indices) given the pool of flag wires
// available at this recursion level. Halves reuse the tail of the pool; the
// head marks this level's good/bad branch.
void emit_stage(Circuit& circ, std::size_t p, std::size_t q,
                const std::vector<BlockEncoding>& oracles, const GadgetLayout& layout,
                const std::vector<int>& pool) {
    if (p == q) {
        circ.add(Gate::add_const(wire_range(layout.b_first(), layout.b_first() + layout.n_b),
                                 static_cast<std::uint64_t>(-1)));
        Circuit op = embed(oracles[p - 1].circuit, wire_range(layout.a_first(), layout.total()),
                           layout.total());
        circ = compose(circ, controlled(op, {{layout.b_first(), false}}));
        return;
    }
    const std::size_t len = q - p + 1;
    const std::size_t left = (len + 1) / 2;  // balanced split, left half rounded up
    const std::size_t mid = p + left - 1;
    if (pool.empty()) throw std::invalid_argument("compression: flag register too narrow");
    const int fresh = pool.front();
    const std::vector<int> tail(pool.begin() + 1, pool.end());

    emit_stage(circ, p, mid, oracles, layout, tail);
    circ.add(Gate::x(fresh));
    std::vector<Control> ctls;
    const int left_flags = ceil_log2(left);
    for (int i = 0; i < left_flags; ++i) ctls.push_back({tail[static_cast<std::size_t>(i)], false});
    for (int w : wire_range(layout.a_first(), layout.a_first() + layout.n_a)) {
        ctls.push_back({w, false});
    }
    circ.add(Gate::x(fresh).with_controls(ctls));
    emit_stage(circ, mid + 1, q, oracles, layout, tail);
}

}  // namespace

Circuit compression_stage(std::size_t p, std::size_t q, const std::vector<BlockEncoding>& oracles,
                          const GadgetLayout& layout) {
    layout.validate();
    check_oracles(oracles, layout);
    if (p < 1 || q < p || q > oracles.size()) {
        throw std::invalid_argument("compression_stage: bad oracle range");
    }
    const std::size_t k = oracles.size();
    if (p == 1 && q == k && layout.n_b < 1 + ceil_log2(k)) {
        throw std::invalid_argument("compression_stage: index register too narrow (n_b < 1 + "
                                    "ceil(log2 K))");
    }
    if (layout.n_c < ceil_log2(q - p + 1)) {
        throw std::invalid_argument("compression_stage: flag register too narrow for range");
    }
    Circuit circ(layout.total());
    circ.labels = layout.wire_labels();
    emit_stage(circ, p, q, oracles, layout, wire_range(0, layout.n_c));
    return circ;
}

CompressionGadget compression_gadget(const std::vector<BlockEncoding>& oracles) {
    if (oracles.empty()) throw std::invalid_argument("compression_gadget: no oracles");
    const int n_a = oracles.front().total_qubits -
                    ceil_log2(static_cast<std::uint64_t>(oracles.front().rows));
    const int n_s = ceil_log2(static_cast<std::uint64_t>(oracles.front().rows));
    GadgetLayout layout = gadget_layout(oracles.size(), n_a, n_s);
    Circuit circ = compression_stage(1, oracles.size(), oracles, layout);
    circ.add(Gate::add_const(wire_range(layout.b_first(), layout.b_first() + layout.n_b),
                             oracles.size()));
    return {std::move(circ), layout};
}

ComplexMatrix compression_projection(const Circuit& circuit, const GadgetLayout& layout,
                                     int max_wires) {
    const ComplexMatrix u = unitary_of(circuit, max_wires);
    const int nb = layout.n_b, ns = layout.n_s;
    const std::size_t dim = std::size_t{1} << (nb + ns);
    ComplexMatrix p(dim, dim);
    auto global = [&](std::size_t bs) {
        const std::size_t b = bs >> ns;
        const std::size_t s = bs & ((std::size_t{1} << ns) - 1);
        // flags = 0, a = 0: index is b shifted past a and s, s at the bottom.
        return (b << (layout.n_a + ns)) | s;
    };
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) p.at(i, j) = u.at(global(i), global(j));
    return p;
}

Circuit prepare_state(const std::vector<double>& amplitudes) {
    if (amplitudes.empty()) throw std::invalid_argument("prepare_state: empty amplitude list");
    double norm2 = 0.0;
    for (double a : amplitudes) {
        if (a < 0.0) throw std::invalid_argument("prepare_state: amplitudes must be nonnegative");
        norm2 += a * a;
    }
    if (std::abs(norm2 - 1.0) > 1e-9) {
        throw std::invalid_argument("prepare_state: amplitudes must be normalized");
    }
    const int m = std::max(1, ceil_log2(amplitudes.size()));
    const std::size_t dim = std::size_t{1} << m;
    std::vector<double> mass(dim, 0.0);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) mass[i] = amplitudes[i] * amplitudes[i];

    Circuit c(m);
    // Wire k splits the mass of each length-2^(m-k) prefix interval in two.
    for (int k = 0; k < m; ++k) {
        const std::size_t block = dim >> k;
        for (std::size_t prefix = 0; prefix < (std::size_t{1} << k); ++prefix) {
            double m0 = 0.0, m1 = 0.0;
            const std::size_t base = prefix * block;
            for (std::size_t i = 0; i < block / 2; ++i) m0 += mass[base + i];
            for (std::size_t i = block / 2; i < block; ++i) m1 += mass[base + i];
            if (m0 + m1 <= 0.0 || m1 <= 0.0) continue;
            const double theta = 2.0 * std::atan2(std::sqrt(m1), std::sqrt(m0));
            std::vector<Control> ctls;
            for (int j = 0; j < k; ++j) {
                const bool bit = (prefix >> (k - 1 - j)) & 1;
                ctls.push_back({j, bit});
            }
            c.add(Gate::ry(k, theta).with_controls(ctls));
        }
    }
    return c;
}

BlockEncoding lcu_be(const std::vector<double>& coeffs, const std::vector<BlockEncoding>& encodings,
                     const std::optional<Circuit>& prepare, const Tolerance& tol) {
    if (coeffs.empty() || coeffs.size() != encodings.size()) {
        throw std::invalid_argument("lcu_be: coefficient/encoding count mismatch");
    }
    for (double w : coeffs) {
        if (!(w > 0.0)) throw std::invalid_argument("lcu_be: coefficients must be positive");
    }
    const std::size_t rows = encodings.front().rows, cols = encodings.front().cols;
    const int a = encodings.front().total_qubits;
    for (const BlockEncoding& e : encodings) {
        e.validate();
        if (e.rows != rows || e.cols != cols) {
            throw std::invalid_argument("lcu_be: target shapes differ");
        }
        if (e.total_qubits != a) {
            throw std::invalid_argument("lcu_be: encoding widths differ (pad first)");
        }
    }
    double alpha_out = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) alpha_out += coeffs[i] * encodings[i].alpha;

    if (coeffs.size() == 1) {
        if (prepare && !prepare->gates.empty()) {
            throw std::invalid_argument("lcu_be: single term takes an empty prepare");
        }
        BlockEncoding out = encodings.front();
        out.alpha = alpha_out;
        return out;
    }

    const int m = ceil_log2(coeffs.size());
    std::vector<double> amps(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        amps[i] = std::sqrt(coeffs[i] * encodings[i].alpha / alpha_out);
    }
    Circuit prep = prepare ? *prepare : prepare_state(amps);
    if (prep.n_wires != m) throw std::invalid_argument("lcu_be: prepare width != select register");
    {
        const ComplexMatrix u = unitary_of(prep);
        double dev = 0.0;
        for (std::size_t i = 0; i < (std::size_t{1} << m); ++i) {
            const double want = i < amps.size() ? amps[i] : 0.0;
            dev = std::max(dev, std::abs(u.at(i, 0) - cplx(want)));
        }
        if (dev > std::max(tol.abs_eps, 1e-9)) {
            throw std::invalid_argument("lcu_be: prepare |0...0> column does not match the "
                                        "weighted coefficients (deviation " + std::to_string(dev) +
                                        ")");
        }
    }

    const int total = m + a;
    Circuit circ(total);
    circ = compose(circ, embed(prep, wire_range(0, m), total));
    for (std::size_t i = 0; i < encodings.size(); ++i) {
        std::vector<Control> pattern;
        for (int j = 0; j < m; ++j) {
            const bool bit = (i >> (m - 1 - j)) & 1;
            pattern.push_back({j, bit});
        }
        Circuit sel = controlled(embed(encodings[i].circuit, wire_range(m, total), total), pattern);
        circ = compose(circ, sel);
    }
    circ = compose(circ, embed(adjoint(prep), wire_range(0, m), total));
    return make_encoding(std::move(circ), rows, cols, alpha_out);
}

BlockEncoding kron_sum_be(const std::vector<KronSumTerm>& terms,
                          const std::optional<Circuit>& prepare) {
    if (terms.empty()) throw std::invalid_argument("kron_sum_be: no terms");
    std::vector<BlockEncoding> encoded;
    std::vector<double> coeffs;
    for (const KronSumTerm& term : terms) {
        if (term.factors.empty()) throw std::invalid_argument("kron_sum_be: term without factors");
        BlockEncoding acc = term.factors.front();
        for (std::size_t i = 1; i < term.factors.size(); ++i) {
            acc = kron_be(acc, term.factors[i]);
        }
        encoded.push_back(std::move(acc));
        coeffs.push_back(term.coeff);
    }
    const std::size_t rows = encoded.front().rows, cols = encoded.front().cols;
    int width = 0;
    for (const BlockEncoding& e : encoded) {
        if (e.rows != rows || e.cols != cols) {
            throw std::invalid_argument("kron_sum_be: term target shapes differ");
        }
        width = std::max(width, e.total_qubits);
    }
    for (BlockEncoding& e : encoded) e = pad_encoding(e, width);
    if (encoded.size() == 1) {
        BlockEncoding out = std::move(encoded.front());
        out.alpha *= coeffs.front();
        return out;
    }
    return lcu_be(coeffs, encoded, prepare);
}

TreeParams tree_params(double alpha, double beta, double gamma, std::optional<double> c_opt) {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma)) {
        throw std::invalid_argument("tree_params: alpha, beta, gamma must lie in (0, 1)");
    }
    TreeParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.c = c_opt.value_or(kDefaultTreeNormalization);
    const double root2 = std::numbers::sqrt2;
    const double denom = p.c - 2.0 * root2 * beta;
    p.x = root2 * beta / p.c;
    constexpr double slack = 1e-12;
    if (!(p.x >= -slack && p.x <= 0.5 + slack)) {
        throw std::invalid_argument("tree_params: infeasible c, x = sqrt(2)*beta/c = " +
                                    std::to_string(p.x) + " outside [0, 1/2]");
    }
    if (!(denom > 0.0)) {
        throw std::invalid_argument("tree_params: infeasible c, c - 2*sqrt(2)*beta <= 0");
    }
    p.gamma_hat = (gamma - 2.0 * beta) / denom;
    p.gamma_tilde = gamma / denom;
    p.alpha_tilde = alpha / denom;
    auto check_unit = [&](double v, const char* name) {
        if (std::abs(v) > 1.0 + slack) {
            throw std::invalid_argument(std::string("tree_params: infeasible c, |") + name +
                                        "| = " + std::to_string(std::abs(v)) + " exceeds 1");
        }
        return std::clamp(v, -1.0, 1.0);
    };
    p.gamma_hat = check_unit(p.gamma_hat, "gamma_hat");
    p.gamma_tilde = check_unit(p.gamma_tilde, "gamma_tilde");
    p.alpha_tilde = check_unit(p.alpha_tilde, "alpha_tilde");
    p.x = std::clamp(p.x, 0.0, 0.5);
    p.theta0 = 2.0 * std::acos(p.alpha_tilde);
    p.theta1 = 2.0 * std::acos(p.gamma_tilde);
    p.theta2 = 2.0 * std::acos(p.gamma_hat) - p.theta0;
    p.zeta = 2.0 * std::acos(std::sqrt(2.0 * p.x));
    return p;
}

Circuit tree_edge_encoding(int n) {
    if (n < 2) throw std::invalid_argument("tree_edge_encoding: depth must be >= 2");
    Circuit c(n + 1);
    for (int i = 0; i < n; ++i) {
        c = compose(c, adjoint(two_cnot_swap(i, i + 1, n + 1)));
    }
    c.add(Gate::h(n));
    return c;
}

Circuit tree_diag_encoding(int n, double theta0, double theta1, double theta2) {
    if (n < 2) throw std::invalid_argument("tree_diag_encoding: depth must be >= 2");
    Circuit c(n + 1);
    c.add(Gate::ry(0, theta0).with_controls({{1, false}}));
    c.add(Gate::ry(0, theta1).with_controls({{1, true}}));
    if (theta2 != 0.0) {
        std::vector<Control> all_data;
        for (int w = 1; w <= n; ++w) all_data.push_back({w, false});
        c.add(Gate::ry(0, theta2).with_controls(all_data));
    }
    return c;
}

ComplexMatrix tree_adjacency(int n, double alpha, double beta, double gamma) {
    if (n < 2) throw std::invalid_argument("tree_adjacency: depth must be >= 2");
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t half = dim / 2;
    ComplexMatrix a(dim, dim);
    for (std::size_t j = 0; j < half; ++j) {
        a.at(2 * j, j) += beta;
        a.at(2 * j + 1, j) += beta;
        a.at(j, 2 * j) += beta;
        a.at(j, 2 * j + 1) += beta;
    }
    a.at(0, 0) += gamma - 2.0 * beta;
    for (std::size_t j = 1; j < half; ++j) a.at(j, j) += alpha;
    for (std::size_t j = half; j < dim; ++j) a.at(j, j) += gamma;
    return a;
}

BlockEncoding tree_be(int n, double alpha, double beta, double gamma, std::optional<double> c_opt) {
    TreeParams p = tree_params(alpha, beta, gamma, c_opt);
    if (std::abs(p.gamma_hat - p.alpha_tilde) <= 1e-12) p.theta2 = 0.0;
    const int total = n + 3;
    Circuit u1 = tree_edge_encoding(n);
    Circuit u2 = tree_diag_encoding(n, p.theta0, p.theta1, p.theta2);

    Circuit circ(total);
    circ.add(Gate::z(0));
    circ.add(Gate::ry(0, p.zeta));
    circ.add(Gate::h(1));
    circ = compose(circ, controlled(embed(u1, [&] {
                       std::vector<int> w;
                       for (int i = 2; i < total; ++i) w.push_back(i);
                       return w;
                   }(), total), {{0, false}, {1, false}}));
    circ = compose(circ, controlled(embed(adjoint(u1), [&] {
                       std::vector<int> w;
                       for (int i = 2; i < total; ++i) w.push_back(i);
                       return w;
                   }(), total), {{0, false}, {1, true}}));
    circ = compose(circ, controlled(embed(u2, [&] {
                       std::vector<int> w;
                       for (int i = 2; i < total; ++i) w.push_back(i);
                       return w;
                   }(), total), {{0, true}}));
    circ.add(Gate::h(1));
    circ.add(Gate::z(0));
    circ.add(Gate::ry(0, p.zeta));
    return make_encoding(std::move(circ), std::size_t{1} << n, std::size_t{1} << n, p.c);
}

}  // namespace beprod
