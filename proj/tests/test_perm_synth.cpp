#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numbers>

#include "beprod/perm.hpp"
#include "beprod/simulate.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace beprod;

namespace {

bool is_permutation_matrix(const ComplexMatrix& u) {
    if (u.rows != u.cols) return false;
    for (std::size_t i = 0; i < u.rows; ++i) {
        int row_ones = 0, col_ones = 0;
        for (std::size_t j = 0; j < u.cols; ++j) {
            const double rij = std::abs(u.at(i, j)), cji = std::abs(u.at(j, i));
            if (rij > 1e-12) {
                if (std::abs(rij - 1.0) > 1e-12) return false;
                ++row_ones;
            }
            if (cji > 1e-12) ++col_ones;
        }
        if (row_ones != 1 || col_ones != 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("two_cnot_swap realizes the expected 4x4 permutation") {
    const ComplexMatrix u = unitary_of(two_cnot_swap(0, 1, 2));
    ComplexMatrix want(4, 4);
    want.at(0, 0) = 1.0;  // |00> -> |00>
    want.at(3, 1) = 1.0;  // |01> -> |11>
    want.at(1, 2) = 1.0;  // |10> -> |01>
    want.at(2, 3) = 1.0;  // |11> -> |10>
    CHECK(matrices_close(u, want));

    // Fixed point |00> and involution through the adjoint.
    std::vector<cplx> zero(4, 0.0);
    zero[0] = 1.0;
    apply_circuit(two_cnot_swap(0, 1, 2), zero);
    CHECK(std::abs(zero[0] - cplx(1.0)) < 1e-15);
    const Circuit both = compose(two_cnot_swap(0, 1, 2), adjoint(two_cnot_swap(0, 1, 2)));
    CHECK(matrices_close(unitary_of(both), ComplexMatrix::identity(4)));
    CHECK_THROWS_AS(two_cnot_swap(1, 1, 2), std::invalid_argument);
}

TEST_CASE("gather_perm: exhaustive payload ordering for s <= 4, d <= 3") {
    for (int s = 1; s <= 4; ++s) {
        for (int d = 0; d <= 3; ++d) {
            for (std::uint64_t m = 1; m <= (std::uint64_t{1} << s); ++m) {
                const GatherSpec spec{s, d, m};
                const Circuit c = gather_perm(spec);
                const ComplexMatrix u = unitary_of(c);
                const auto map = gather_perm_index_map(spec);
                for (std::size_t in = 0; in < map.size(); ++in) {
                    if (map[in] == static_cast<std::size_t>(-1)) continue;
                    std::vector<cplx> state(map.size(), 0.0);
                    state[in] = 1.0;
                    apply_circuit(c, state);
                    REQUIRE(std::abs(state[map[in]] - cplx(1.0)) < 1e-9);
                }
                CHECK(is_permutation_matrix(u));
                // |0...0> is always fixed.
                CHECK(std::abs(u.at(0, 0) - cplx(1.0)) < 1e-9);
            }
        }
    }
}

TEST_CASE("gather_perm costs: power-of-two payloads use 2 CNOTs per level") {
    for (int d = 0; d <= 4; ++d) {
        const Circuit full = gather_perm({3, d, 8});
        CHECK(gate_count(full) == 0);  // payload fills each block

        const Circuit c = gather_perm({3, d, 4});
        CHECK(gate_count(c) == gate_count_kind(c, GateKind::CNOT));
        CHECK(gate_count(c) == 2 * d);
    }
}

TEST_CASE("gather_perm case (ii): payload 5 in blocks of 8") {
    // The first doubling layer must land block 1's payload at rows 5..9.
    const GatherSpec spec{3, 2, 5};
    const Circuit c = gather_perm(spec);
    const auto map = gather_perm_index_map(spec);
    for (std::size_t j = 0; j < 5; ++j) CHECK(map[8 + j] == 5 + j);
    std::vector<cplx> state(32, 0.0);
    state[10] = 1.0;
    apply_circuit(c, state);
    CHECK(std::abs(state[7] - cplx(1.0)) < 1e-9);
    CHECK(gate_count_kind(c, GateKind::AddConst) == 4);  // two shift factors per layer
}

TEST_CASE("block_gather places a sub-block grid contiguously") {
    std::mt19937_64 rng(43);
    // Random 8x8 unitary seen as a 2x2 grid of 4x4 blocks, each carrying a
    // 2x2 payload at its top-left corner.
    const ComplexMatrix v = beprod::testing::random_unitary(rng, 3);
    Circuit inner(3);
    inner.add(Gate::oracle("V", v, {0, 1, 2}));
    const GatherSpec spec{2, 1, 2};
    const Circuit c = block_gather(spec, spec, inner);
    const ComplexMatrix u = unitary_of(c);
    for (std::size_t bi = 0; bi < 2; ++bi)
        for (std::size_t bj = 0; bj < 2; ++bj)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) {
                    CHECK(std::abs(u.at(bi * 2 + i, bj * 2 + j) -
                                   v.at(bi * 4 + i, bj * 4 + j)) < 1e-10);
                }
    // Identity inner with trivial specs stays the identity.
    const Circuit id = block_gather({2, 1, 4}, {2, 1, 4}, Circuit(3));
    CHECK(matrices_close(unitary_of(id), ComplexMatrix::identity(8)));
    CHECK_THROWS_AS(block_gather({2, 2, 2}, {2, 1, 2}, inner), std::invalid_argument);
}

TEST_CASE("product_perm equals its literal index map") {
    for (int c = 1; c <= 4; ++c) {
        for (std::uint64_t k = 1; k <= (std::uint64_t{1} << c); ++k) {
            const int t = c + 1;
            const Circuit circ = product_perm(c, k, t);
            const ComplexMatrix u = unitary_of(circ);
            CHECK(is_permutation_matrix(u));
            const auto map = product_perm_index_map(c, k);
            for (std::size_t in = 0; in < map.size(); ++in) {
                CHECK(std::abs(u.at(map[in], in) - cplx(1.0)) < 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(product_perm(2, 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(product_perm(2, 1, 2), std::invalid_argument);
}

TEST_CASE("product_perm acts only on the flag wire and the last c wires") {
    // With t > c+1 the middle wires stay untouched: the unitary factors as
    // a permutation on (flag, low c) tensored with identity in between.
    const int c = 2, t = 5;
    const std::uint64_t k = 3;
    const ComplexMatrix u = unitary_of(product_perm(c, k, t));
    const auto map = product_perm_index_map(c, k);
    for (std::size_t in = 0; in < 32; ++in) {
        const std::size_t flag = in >> 4, mid = (in >> 2) & 3, low = in & 3;
        const std::size_t active_in = flag * 4 + low;
        const std::size_t active_out = map[active_in];
        const std::size_t out = ((active_out >> 2) << 4) | (mid << 2) | (active_out & 3);
        CHECK(std::abs(u.at(out, in) - cplx(1.0)) < 1e-12);
    }
}

TEST_CASE("product_perm for power-of-two K is an X plus one negated multi-control") {
    const Circuit c = product_perm(3, 4, 4);
    REQUIRE(gate_count(c) == 2);
    CHECK(c.gates[0].kind == GateKind::X);
    CHECK(c.gates[1].kind == GateKind::X);
    CHECK(c.gates[1].controls.size() == 1);
    CHECK_FALSE(c.gates[1].controls[0].positive);
    // K = 2^c degenerates to the identity block structure.
    const Circuit full = product_perm(2, 4, 3);
    CHECK(matrices_close(unitary_of(full), ComplexMatrix::identity(8)));
}

TEST_CASE("copy_perm copies low bits and is an involution") {
    CHECK(gate_count(copy_perm(3, 3, 0)) == 0);
    const Circuit c = copy_perm(3, 3, 2);
    CHECK(gate_count(c) == 2);
    CHECK(gate_count_kind(c, GateKind::CNOT) == 2);

    // |000>|011> -> |011>|011>
    std::vector<cplx> state(64, 0.0);
    state[0b000011] = 1.0;
    apply_circuit(c, state);
    CHECK(std::abs(state[0b011011] - cplx(1.0)) < 1e-15);

    CHECK(matrices_close(unitary_of(compose(c, c)), ComplexMatrix::identity(64)));
    for (std::uint64_t j = 0; j < 4; ++j) {
        std::vector<cplx> s(64, 0.0);
        s[j] = 1.0;  // |0>_b |j>_c with j < 2^r
        apply_circuit(c, s);
        CHECK(std::abs(s[(j << 3) | j] - cplx(1.0)) < 1e-15);
    }
    CHECK_THROWS_AS(copy_perm(2, 3, 3), std::invalid_argument);
}

TEST_CASE("qft_circuit matches the DFT matrix") {
    {
        const ComplexMatrix u = unitary_of(qft_circuit(1));
        const double r = 1.0 / std::sqrt(2.0);
        ComplexMatrix h(2, 2);
        h.entries = {r, r, r, -r};
        CHECK(max_abs_diff(u, h) < 1e-12);
    }
    for (int n = 2; n <= 5; ++n) {
        const ComplexMatrix u = unitary_of(qft_circuit(n));
        const std::size_t dim = std::size_t{1} << n;
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k) {
                const double ang = 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                   static_cast<double>(dim);
                const cplx want = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), ang);
                REQUIRE(std::abs(u.at(j, k) - want) < 1e-9);
            }
        const Circuit round = compose(qft_circuit(n), adjoint(qft_circuit(n)));
        CHECK(max_abs_diff(unitary_of(round), ComplexMatrix::identity(dim)) < 1e-9);
    }
}
