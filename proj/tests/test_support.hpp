#pragma once

#include <random>

#include "beprod/block_encoding.hpp"
#include "beprod/circuit.hpp"
#include "beprod/complex_matrix.hpp"

namespace beprod::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    return lo + (hi - lo) * u;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (cplx& z : m.entries) z = cplx(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    return m;
}

/// Random matrix rescaled so its spectral norm is strictly below 1.
inline ComplexMatrix random_contraction(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix m = random_matrix(rng, rows, cols);
    const double norm = spectral_norm(m);
    return scale_ref(m, 1.0 / (norm * (1.0 + 1e-6)));
}

inline std::vector<cplx> random_state(std::mt19937_64& rng, std::size_t dim) {
    std::vector<cplx> v(dim);
    double norm2 = 0.0;
    for (cplx& z : v) {
        z = cplx(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        norm2 += std::norm(z);
    }
    for (cplx& z : v) z /= std::sqrt(norm2);
    return v;
}

/// Random unitary from the Halmos completion of a random contraction.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, int wires) {
    const std::size_t half = std::size_t{1} << (wires - 1);
    return halmos_dilation_matrix(random_contraction(rng, half, half));
}

inline Circuit random_circuit(std::mt19937_64& rng, int wires, int n_gates) {
    Circuit c(wires);
    for (int g = 0; g < n_gates; ++g) {
        const int pick = static_cast<int>(rng() % 7);
        const int w = static_cast<int>(rng() % static_cast<std::uint64_t>(wires));
        switch (pick) {
            case 0: c.add(Gate::x(w)); break;
            case 1: c.add(Gate::h(w)); break;
            case 2: c.add(Gate::z(w)); break;
            case 3: c.add(Gate::ry(w, uniform(rng, -3.0, 3.0))); break;
            case 4: c.add(Gate::phase(w, uniform(rng, -3.0, 3.0))); break;
            case 5: {
                if (wires < 2) { c.add(Gate::x(w)); break; }
                int v = static_cast<int>(rng() % static_cast<std::uint64_t>(wires));
                if (v == w) v = (v + 1) % wires;
                c.add(Gate::cnot(w, v));
                break;
            }
            default: {
                if (wires < 2) { c.add(Gate::h(w)); break; }
                int v = static_cast<int>(rng() % static_cast<std::uint64_t>(wires));
                if (v == w) v = (v + 1) % wires;
                c.add(Gate::swap(w, v));
                break;
            }
        }
    }
    return c;
}

}  // namespace beprod::testing
