#include "beprod/perm.hpp"

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

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::vector<int> wire_range(int from, int to) {  // [from, to)
    std::vector<int> w;
    for (int i = from; i < to; ++i) w.push_back(i);
    return w;
}

}  // namespace

void GatherSpec::validate() const {
    if (s < 1) throw std::invalid_argument("GatherSpec: s must be >= 1");
    if (d < 0) throw std::invalid_argument("GatherSpec: d must be >= 0");
    if (m < 1 || m > (std::uint64_t{1} << s)) {
        throw std::invalid_argument("GatherSpec: payload M out of range [1, 2^s]");
    }
}

Circuit two_cnot_swap(int hi, int lo, int n_wires) {
    if (hi == lo) throw std::invalid_argument("two_cnot_swap: wires collide");
    Circuit c(n_wires);
    c.add(Gate::cnot(hi, lo));
    c.add(Gate::cnot(lo, hi));
    return c;
}

Circuit gather_perm(const GatherSpec& spec) {
    spec.validate();
    const int s = spec.s, d = spec.d;
    const int total = d + s;
    Circuit c(total);
    if (spec.m == (std::uint64_t{1} << s)) return c;  // payload already fills each block
    const int t = ceil_log2(spec.m);
    const bool pow2 = is_pow2(spec.m);

    // Layer l merges super-blocks of 2^l original blocks into pairs. The
    // pair selector is wire d-1-l; the payload occupies the low t+l wires.
    for (int l = 0; l < d; ++l) {
        const int sel = d - 1 - l;
        const int tl = t + l;
        const int lo = total - tl - 1;  // wire just above the payload register
        if (t < s) {
            c = compose(c, two_cnot_swap(sel, lo, total));
        }
        if (!pow2) {
            // Shift factors of the block permutation: payload size M<<l
            // inside blocks of size 2^e.
            const int e = (t < s) ? tl : (s + l);
            const int top = total - e - 1;  // == lo when t < s, == sel otherwise
            const std::uint64_t payload = spec.m << l;
            const std::uint64_t gap = (std::uint64_t{1} << e) - payload;
            Gate inner = Gate::add_const(wire_range(top + 1, total), gap)
                             .with_controls({{top, false}});
            c.add(inner);
            c.add(Gate::add_const(wire_range(top, total),
                                  ((std::uint64_t{1} << (e + 1)) - gap)));
        }
    }
    return c;
}

std::vector<std::size_t> gather_perm_index_map(const GatherSpec& spec) {
    spec.validate();
    const std::size_t dim = std::size_t{1} << (spec.d + spec.s);
    const std::size_t block = std::size_t{1} << spec.s;
    std::vector<std::size_t> map(dim, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < (std::size_t{1} << spec.d); ++i) {
        for (std::size_t j = 0; j < spec.m; ++j) map[i * block + j] = i * spec.m + j;
    }
    return map;
}

Circuit block_gather(const GatherSpec& row_spec, const GatherSpec& col_spec,
                     const Circuit& inner) {
    row_spec.validate();
    col_spec.validate();
    if (row_spec.d + row_spec.s != inner.n_wires || col_spec.d + col_spec.s != inner.n_wires) {
        throw std::invalid_argument("block_gather: spec widths must match inner circuit");
    }
    return compose(compose(adjoint(gather_perm(col_spec)), inner), gather_perm(row_spec));
}

Circuit product_perm(int c, std::uint64_t k_payload, int t) {
    if (c < 1 || t < c + 1) throw std::invalid_argument("product_perm: need t >= c+1");
    if (k_payload < 1 || k_payload > (std::uint64_t{1} << c)) {
        throw std::invalid_argument("product_perm: K out of range [1, 2^c]");
    }
    Circuit out(t);
    if (is_pow2(k_payload)) {
        // X then an X negatively controlled on the pad wires above the
        // payload; for K = 2^c the controls vanish and the two X cancel.
        const int k = ceil_log2(k_payload);
        out.add(Gate::x(0));
        std::vector<Control> pads;
        for (int w = t - c; w < t - k; ++w) pads.push_back({w, false});
        out.add(Gate::x(0).with_controls(pads));
        return out;
    }
    const std::uint64_t gap = (std::uint64_t{1} << c) - k_payload;
    out.add(Gate::x(0));
    out.add(Gate::add_const(wire_range(t - c, t), gap));
    std::vector<int> full = {0};
    for (int w = t - c; w < t; ++w) full.push_back(w);
    out.add(Gate::add_const(full, k_payload));
    return out;
}

std::vector<std::size_t> product_perm_index_map(int c, std::uint64_t k_payload) {
    const std::size_t half = std::size_t{1} << c;
    std::vector<std::size_t> map(2 * half);
    for (std::size_t j = 0; j < 2 * half; ++j) {
        if (j < k_payload) {
            map[j] = j;
        } else if (j < half) {
            map[j] = half + j;
        } else if (j < half + k_payload) {
            map[j] = j;
        } else {
            map[j] = j - half;
        }
    }
    return map;
}

Circuit copy_perm(int b, int c, int r) {
    if (r < 0 || r > std::min(b, c)) throw std::invalid_argument("copy_perm: r out of range");
    Circuit out(b + c);
    for (int i = 0; i < r; ++i) {
        out.add(Gate::cnot(b + c - r + i, b - r + i));
    }
    return out;
}

Circuit qft_circuit(int n) {
    if (n < 1 || n > 14) throw std::invalid_argument("qft_circuit: n out of range [1, 14]");
    Circuit c(n);
    const double pi = std::numbers::pi;
    for (int j = 0; j < n; ++j) {
        c.add(Gate::h(j));
        for (int k = j + 1; k < n; ++k) {
            c.add(Gate::controlled_phase(k, j, pi / static_cast<double>(1ULL << (k - j))));
        }
    }
    for (int i = 0; i < n / 2; ++i) c.add(Gate::swap(i, n - 1 - i));
    return c;
}

}  // namespace beprod
