#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numbers>

#include "beprod/gadgets.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace beprod;
using beprod::testing::random_contraction;

namespace {

BlockEncoding identity_oracle(int n_a, int n_s) {
    return pad_encoding(
        make_encoding(Circuit(n_s), std::size_t{1} << n_s, std::size_t{1} << n_s, 1.0),
        n_a + n_s);
}

std::vector<BlockEncoding> random_oracles(std::mt19937_64& rng, std::size_t k, int n_a, int n_s) {
    std::vector<BlockEncoding> out;
    const std::size_t dim = std::size_t{1} << n_s;
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(pad_encoding(
            halmos_dilation(random_contraction(rng, dim, dim), "H" + std::to_string(i + 1)),
            n_a + n_s));
    }
    return out;
}

ComplexMatrix encoded_product(const std::vector<BlockEncoding>& oracles, std::size_t upto) {
    const std::size_t dim = oracles.front().rows;
    ComplexMatrix acc = ComplexMatrix::identity(dim);
    // Ordered product H_k ... H_1: later factors multiply from the left.
    for (std::size_t j = 1; j <= upto; ++j) acc = matmul_ref(extract_block(oracles[j - 1]), acc);
    return acc;
}

// Amplitude table of T_{p,q} on |0>_c |k>_b |0>_a |psi=s_in>, restricted to
// the flags-0 ancilla-0 sector, indexed by (b value, system value).
ComplexMatrix stage_sector(const Circuit& circ, const GadgetLayout& layout, std::uint64_t k_bits,
                           std::size_t s_in) {
    const std::size_t dim = std::size_t{1} << circ.n_wires;
    std::vector<cplx> state(dim, 0.0);
    const int shift_b = layout.n_a + layout.n_s;
    state[(k_bits << shift_b) | s_in] = 1.0;
    apply_circuit(circ, state);
    ComplexMatrix out(std::size_t{1} << layout.n_b, std::size_t{1} << layout.n_s);
    for (std::size_t b = 0; b < out.rows; ++b)
        for (std::size_t s = 0; s < out.cols; ++s) out.at(b, s) = state[(b << shift_b) | s];
    return out;
}

}  // namespace

TEST_CASE("compression stage base case with an identity oracle") {
    const std::vector<BlockEncoding> oracles = {identity_oracle(1, 1)};
    const GadgetLayout layout = gadget_layout(1, 1, 1);
    CHECK(layout.n_c == 0);
    CHECK(layout.n_b == 1);
    const Circuit t11 = compression_stage(1, 1, oracles, layout);

    // k = 1: decrement reaches 0, oracle fires (identity), system unchanged.
    ComplexMatrix sector = stage_sector(t11, layout, 1, 1);
    CHECK(std::abs(sector.at(0, 1) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(sector.at(1, 1)) < 1e-12);

    // k = 0: decrement wraps to the negative half, most significant index
    // bit is 1 and the oracle is skipped.
    sector = stage_sector(t11, layout, 0, 1);
    CHECK(std::abs(sector.at(1, 1) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(sector.at(0, 1)) < 1e-12);
}

TEST_CASE("compression stage: three oracles, index 2 applies H2 H1 only") {
    std::mt19937_64 rng(211);
    const int n_a = 1, n_s = 1;
    const auto oracles = random_oracles(rng, 3, n_a, n_s);
    const GadgetLayout layout = gadget_layout(3, n_a, n_s);
    const Circuit t13 = compression_stage(1, 3, oracles, layout);

    const ComplexMatrix want =
        matmul_ref(extract_block(oracles[1]), extract_block(oracles[0]));  // H2 H1
    const std::uint64_t mask = (std::uint64_t{1} << layout.n_b) - 1;
    const std::uint64_t out_b = (2 - 3 + 1 - 1) & mask;  // k - q + p - 1 = -1
    for (std::size_t s_in = 0; s_in < 2; ++s_in) {
        const ComplexMatrix sector = stage_sector(t13, layout, 2, s_in);
        for (std::size_t s_out = 0; s_out < 2; ++s_out) {
            CHECK(std::abs(sector.at(out_b, s_out) - want.at(s_out, s_in)) < 1e-10);
        }
        for (std::size_t b = 0; b < sector.rows; ++b) {
            if (b == out_b) continue;
            for (std::size_t s_out = 0; s_out < 2; ++s_out) {
                CHECK(std::abs(sector.at(b, s_out)) < 1e-10);
            }
        }
    }
}

TEST_CASE("compression stage register discipline, exhaustive small sweep") {
    std::mt19937_64 rng(223);
    for (std::size_t k_total : {1, 2, 3, 4}) {
        for (int n_a : {1, 2}) {
            for (int n_s : {1, 2}) {
                const auto oracles = random_oracles(rng, k_total, n_a, n_s);
                const GadgetLayout layout = gadget_layout(k_total, n_a, n_s);
                const Circuit stage = compression_stage(1, k_total, oracles, layout);
                const std::uint64_t mask = (std::uint64_t{1} << layout.n_b) - 1;
                const std::size_t s_dim = std::size_t{1} << n_s;
                for (std::uint64_t k = 0; k <= k_total; ++k) {
                    ComplexMatrix prod(s_dim, s_dim);
                    prod = ComplexMatrix::identity(s_dim);
                    for (std::size_t j = 1; j <= std::min<std::uint64_t>(k, k_total); ++j) {
                        prod = matmul_ref(extract_block(oracles[j - 1]), prod);
                    }
                    const std::uint64_t out_b = (k - k_total) & mask;
                    for (std::size_t s_in = 0; s_in < s_dim; ++s_in) {
                        const ComplexMatrix sector = stage_sector(stage, layout, k, s_in);
                        for (std::size_t b = 0; b < sector.rows; ++b)
                            for (std::size_t s = 0; s < s_dim; ++s) {
                                const cplx want = (b == out_b) ? prod.at(s, s_in) : cplx(0.0);
                                REQUIRE(std::abs(sector.at(b, s) - want) < 1e-9);
                            }
                    }
                }
            }
        }
    }
}

TEST_CASE("compression stage sub-range accepts negative running indices") {
    std::mt19937_64 rng(227);
    const auto oracles = random_oracles(rng, 4, 1, 1);
    const GadgetLayout layout = gadget_layout(4, 1, 1);
    const Circuit t34 = compression_stage(3, 4, oracles, layout);
    const std::uint64_t mask = (std::uint64_t{1} << layout.n_b) - 1;
    // k ranges over [1-p, K] = [-2, 4]; oracles H_{p..min(q, p+k-1)} fire.
    for (std::int64_t k = -2; k <= 4; ++k) {
        const std::size_t upper =
            k <= 0 ? 2 : std::min<std::size_t>(4, static_cast<std::size_t>(2 + k));
        ComplexMatrix prod = ComplexMatrix::identity(2);
        for (std::size_t j = 3; j <= upper; ++j) prod = matmul_ref(extract_block(oracles[j - 1]), prod);
        const std::uint64_t out_b = static_cast<std::uint64_t>(k - 4 + 3 - 1) & mask;
        const ComplexMatrix sector =
            stage_sector(t34, layout, static_cast<std::uint64_t>(k) & mask, 1);
        for (std::size_t b = 0; b < sector.rows; ++b)
            for (std::size_t s = 0; s < 2; ++s) {
                const cplx want = (b == out_b) ? prod.at(s, 1) : cplx(0.0);
                REQUIRE(std::abs(sector.at(b, s) - want) < 1e-9);
            }
    }
}

TEST_CASE("compression gadget projection and query accounting") {
    std::mt19937_64 rng(229);
    for (std::size_t k_total : {1, 2, 3, 4}) {
        const int n_a = 1, n_s = 1;
        const auto oracles = random_oracles(rng, k_total, n_a, n_s);
        const CompressionGadget v = compression_gadget(oracles);
        CHECK(v.layout.n_c == (k_total == 1 ? 0 : (k_total <= 2 ? 1 : 2)));

        const ComplexMatrix proj = compression_projection(v.circuit, v.layout);
        const std::size_t s_dim = std::size_t{1} << n_s;
        for (std::uint64_t k = 0; k <= k_total; ++k) {
            const ComplexMatrix want = encoded_product(oracles, k);
            for (std::size_t i = 0; i < s_dim; ++i)
                for (std::size_t j = 0; j < s_dim; ++j) {
                    REQUIRE(std::abs(proj.at(k * s_dim + i, k * s_dim + j) - want.at(i, j)) <
                            1e-9);
                }
        }
        // Block diagonality over the restricted index span: no cross terms.
        for (std::uint64_t k1 = 0; k1 <= k_total; ++k1)
            for (std::uint64_t k2 = 0; k2 <= k_total; ++k2) {
                if (k1 == k2) continue;
                for (std::size_t i = 0; i < s_dim; ++i)
                    for (std::size_t j = 0; j < s_dim; ++j) {
                        REQUIRE(std::abs(proj.at(k1 * s_dim + i, k2 * s_dim + j)) < 1e-9);
                    }
            }

        // One query per oracle, exactly one control each, negative polarity.
        int queries = 0;
        for (const Gate& g : v.circuit.gates) {
            if (g.kind != GateKind::Oracle) continue;
            ++queries;
            CHECK(g.controls.size() == 1);
            CHECK_FALSE(g.controls[0].positive);
        }
        CHECK(queries == static_cast<int>(k_total));
    }
}

TEST_CASE("compression gadget rejects an undersized index register") {
    std::mt19937_64 rng(233);
    const auto oracles = random_oracles(rng, 4, 1, 1);
    GadgetLayout narrow = gadget_layout(4, 1, 1);
    narrow.n_b = 2;  // needs 1 + ceil(log2 4) = 3
    CHECK_THROWS_AS(compression_stage(1, 4, oracles, narrow), std::invalid_argument);
}

TEST_CASE("prepare_state builds the requested amplitudes") {
    std::mt19937_64 rng(239);
    for (std::size_t len : {2, 3, 5, 8}) {
        std::vector<double> amps(len);
        double norm2 = 0.0;
        for (double& a : amps) {
            a = beprod::testing::uniform(rng, 0.05, 1.0);
            norm2 += a * a;
        }
        for (double& a : amps) a /= std::sqrt(norm2);
        const Circuit prep = prepare_state(amps);
        const ComplexMatrix u = unitary_of(prep);
        for (std::size_t i = 0; i < u.rows; ++i) {
            const double want = i < len ? amps[i] : 0.0;
            CHECK(std::abs(u.at(i, 0) - cplx(want)) < 1e-12);
        }
    }
}

TEST_CASE("lcu_be: degenerate and weighted combinations") {
    std::mt19937_64 rng(241);
    const ComplexMatrix a = random_contraction(rng, 4, 4);
    const BlockEncoding ea = pad_encoding(halmos_dilation(a, "A"), 3);

    // Single term passes through.
    const BlockEncoding single = lcu_be({1.0}, {ea});
    CHECK(single.circuit == ea.circuit);
    CHECK(single.alpha == ea.alpha);

    // Two copies of the same encoding average to itself.
    const BlockEncoding twice = lcu_be({0.5, 0.5}, {ea, ea});
    CHECK(verify_encoding(twice, a).status == VerifyStatus::pass);

    // Three random terms with weights 0.2 / 0.3 / 0.5.
    const ComplexMatrix b = random_contraction(rng, 4, 4);
    const ComplexMatrix c = random_contraction(rng, 4, 4);
    const BlockEncoding eb = pad_encoding(halmos_dilation(b, "B"), 3);
    const BlockEncoding ec = pad_encoding(halmos_dilation(c, "C"), 3);
    const BlockEncoding sum = lcu_be({0.2, 0.3, 0.5}, {ea, eb, ec});
    CHECK(sum.alpha == 1.0);
    ComplexMatrix want = add_ref(add_ref(scale_ref(a, 0.2), scale_ref(b, 0.3)), scale_ref(c, 0.5));
    CHECK(verify_encoding(sum, want).status == VerifyStatus::pass);
}

TEST_CASE("lcu_be validates the prepare column") {
    std::mt19937_64 rng(251);
    const ComplexMatrix a = random_contraction(rng, 2, 2);
    const BlockEncoding ea = halmos_dilation(a, "A");
    Circuit bad(1);
    bad.add(Gate::h(0));  // uniform amplitudes, not the requested split
    CHECK_THROWS_AS(lcu_be({0.9, 0.1}, {ea, ea}, bad), std::invalid_argument);
    CHECK_THROWS_AS(lcu_be({0.5}, {}, std::nullopt), std::invalid_argument);
}

TEST_CASE("lcu_be honors subnormalization weights") {
    std::mt19937_64 rng(257);
    const ComplexMatrix a = random_contraction(rng, 2, 2);
    const ComplexMatrix b = random_contraction(rng, 2, 2);
    BlockEncoding ea = halmos_dilation(a, "A");
    BlockEncoding eb = halmos_dilation(b, "B");
    ea.alpha = 2.0;  // encodes 2a via block a
    const BlockEncoding sum = lcu_be({1.0, 1.0}, {ea, eb});
    CHECK(sum.alpha == 3.0);
    // alpha-weighted target: 1*(2a) + 1*b, where ea's target is 2a.
    const ComplexMatrix want = add_ref(scale_ref(a, 2.0), b);
    CHECK(verify_encoding(sum, want).status == VerifyStatus::pass);
}

TEST_CASE("kron_sum_be: identity term and Kronecker-sum assembly") {
    std::mt19937_64 rng(263);
    const BlockEncoding id2 = make_encoding(Circuit(1), 2, 2, 1.0);
    {
        const BlockEncoding be = kron_sum_be({{1.0, {id2, id2}}});
        CHECK(matrices_close(extract_block(be), ComplexMatrix::identity(4)));
    }
    const ComplexMatrix d = random_contraction(rng, 2, 2);
    const BlockEncoding ed = halmos_dilation(d, "D");
    const BlockEncoding be = kron_sum_be({{1.0, {id2, ed}}, {1.0, {ed, id2}}});
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    const ComplexMatrix want = add_ref(kron_ref(i2, d), kron_ref(d, i2));
    CHECK(verify_encoding(be, want).status == VerifyStatus::pass);
}

TEST_CASE("kron_sum_be: transposed factors via the conjugate-adjoint convention") {
    std::mt19937_64 rng(269);
    const ComplexMatrix a = random_contraction(rng, 2, 2);
    const ComplexMatrix b = random_contraction(rng, 2, 2);
    const BlockEncoding ea = halmos_dilation(a, "A");
    const BlockEncoding ebt = transpose_encoding(halmos_dilation(b, "B"));
    CHECK(max_abs_diff(extract_block(ebt), transpose_ref(b)) < 1e-10);
    const BlockEncoding be = kron_sum_be({{1.0, {ebt, ea}}});
    CHECK(verify_encoding(be, kron_ref(transpose_ref(b), a)).status == VerifyStatus::pass);
}

TEST_CASE("tree_params: frozen regression constants") {
    const TreeParams p = tree_params(0.4, 0.2, 0.8);
    CHECK(std::abs(p.c - 4.82842712474619) < 1e-14);
    CHECK(std::abs(p.x - 0.05857864376269051) < 1e-15);
    CHECK(std::abs(p.gamma_hat - 0.09383632135605433) < 1e-15);
    CHECK(std::abs(p.gamma_tilde - 0.18767264271210865) < 1e-15);
    CHECK(std::abs(p.alpha_tilde - 0.09383632135605433) < 1e-15);
    CHECK(std::abs(p.zeta - 2.44290260540777) < 1e-13);
}

TEST_CASE("tree_params: stochastic family has gamma_hat == alpha_tilde") {
    // alpha = 1 - 3 beta and gamma = 1 - beta make the correction entry
    // equal the interior entry at any feasible normalization.
    const TreeParams p = tree_params(0.25, 0.25, 0.75);
    CHECK(std::abs(p.gamma_hat - p.alpha_tilde) < 1e-15);
}

TEST_CASE("tree_params: infeasible normalizations are rejected by name") {
    // x > 1/2
    try {
        tree_params(0.1, 0.3, 0.5, 2.0 * std::numbers::sqrt2 * 0.3 * 0.9);
        FAIL("expected infeasibility");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("x") != std::string::npos);
    }
    // |gamma_tilde| > 1: the stochastic family at c = 1.
    try {
        tree_params(0.25, 0.25, 0.75, 1.0);
        FAIL("expected infeasibility");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("gamma_tilde") != std::string::npos);
    }
    CHECK_THROWS_AS(tree_params(0.0, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("tree_edge_encoding matches the shifted-pair rule") {
    for (int n : {2, 3, 4}) {
        const Circuit u1 = tree_edge_encoding(n);
        const ComplexMatrix u = unitary_of(u1);
        const std::size_t dim = std::size_t{1} << n;
        const double r = 1.0 / std::sqrt(2.0);
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t i = 0; i < dim; ++i) {
                cplx want = 0.0;
                if (j < dim / 2 && (i == 2 * j || i == 2 * j + 1)) want = r;
                REQUIRE(std::abs(u.at(i, j) - want) < 1e-12);
            }
        CHECK(gate_count_kind(u1, GateKind::CNOT) == 2 * n);
        CHECK(gate_count_kind(u1, GateKind::H) == 1);
    }
    CHECK_THROWS_AS(tree_edge_encoding(1), std::invalid_argument);
}

TEST_CASE("tree_diag_encoding realizes the stated diagonal") {
    {
        const Circuit u2 = tree_diag_encoding(3, 0.0, 0.0, 0.0);
        CHECK(matrices_close(unitary_of(u2), ComplexMatrix::identity(16)));
    }
    std::mt19937_64 rng(271);
    const double t0 = beprod::testing::uniform(rng, 0.1, 3.0);
    const double t1 = beprod::testing::uniform(rng, 0.1, 3.0);
    const double t2 = beprod::testing::uniform(rng, 0.1, 3.0);
    const ComplexMatrix u = unitary_of(tree_diag_encoding(3, t0, t1, t2));
    const ComplexMatrix block = top_left_block(u, 8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            double want = 0.0;
            if (i == j) {
                if (i == 0) want = std::cos((t0 + t2) / 2.0);
                else if (i < 4) want = std::cos(t0 / 2.0);
                else want = std::cos(t1 / 2.0);
            }
            CHECK(std::abs(block.at(i, j) - cplx(want)) < 1e-12);
        }
}

TEST_CASE("tree_adjacency reproduces the depth-3 instance") {
    const double a = 0.4, b = 0.2, g = 0.8;
    const ComplexMatrix m = tree_adjacency(3, a, b, g);
    const double want[8][8] = {
        {g, b, 0, 0, 0, 0, 0, 0}, {b, a, b, b, 0, 0, 0, 0}, {0, b, a, 0, b, b, 0, 0},
        {0, b, 0, a, 0, 0, b, b}, {0, 0, b, 0, g, 0, 0, 0}, {0, 0, b, 0, 0, g, 0, 0},
        {0, 0, 0, b, 0, 0, g, 0}, {0, 0, 0, b, 0, 0, 0, g}};
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(m.at(i, j) - cplx(want[i][j])) < 1e-15);
}

TEST_CASE("tree_be encodes the adjacency matrix over c") {
    for (int n : {3, 4}) {
        const double a = 0.4, b = 0.2, g = 0.8;
        const BlockEncoding be = tree_be(n, a, b, g);
        CHECK(be.total_qubits == n + 3);  // exactly 3 ancillas
        CHECK(verify_encoding(be, tree_adjacency(n, a, b, g)).status == VerifyStatus::pass);
        // The encoded block is symmetric because the adjacency matrix is.
        const ComplexMatrix block = extract_block(be);
        CHECK(max_abs_diff(block, transpose_ref(block)) < 1e-10);
    }
}

TEST_CASE("tree_be with distinct correction entry keeps the extra rotation") {
    const double a = 0.3, b = 0.2, g = 0.8;  // gamma - 2 beta != alpha
    const BlockEncoding be = tree_be(3, a, b, g);
    CHECK(verify_encoding(be, tree_adjacency(3, a, b, g)).status == VerifyStatus::pass);
    const int wide_ry = gate_count(be.circuit, [](const Gate& gate) {
        return gate.kind == GateKind::Ry && gate.controls.size() >= 3;
    });
    CHECK(wide_ry == 1);
}

TEST_CASE("tree_be elides the multi-controlled rotation when possible") {
    // gamma - 2 beta == alpha forces theta2 == 0.
    const BlockEncoding be = tree_be(3, 0.4, 0.2, 0.8);
    const int wide_ry = gate_count(be.circuit, [](const Gate& gate) {
        return gate.kind == GateKind::Ry && gate.controls.size() >= 3;
    });
    CHECK(wide_ry == 0);
    CHECK(verify_encoding(be, tree_adjacency(3, 0.4, 0.2, 0.8)).status == VerifyStatus::pass);
}

TEST_CASE("tree_be: stochastic family at c = 1 is rejected as infeasible") {
    CHECK_THROWS_AS(tree_be(3, 0.25, 0.25, 0.75, 1.0), std::invalid_argument);
}

TEST_CASE("tree_be: stochastic family at a feasible c has unit column sums times c") {
    // Minimal feasible normalization for (0.25, 0.25, 0.75) is
    // gamma + 2 sqrt(2) beta; columns of the block then sum to 1/c.
    const double c = 0.75 + 2.0 * std::numbers::sqrt2 * 0.25 + 1e-9;
    const BlockEncoding be = tree_be(3, 0.25, 0.25, 0.75, c);
    CHECK(verify_encoding(be, tree_adjacency(3, 0.25, 0.25, 0.75)).status == VerifyStatus::pass);
    const ComplexMatrix block = extract_block(be);  // alpha-scaled: equals A
    for (std::size_t j = 0; j < 8; ++j) {
        cplx sum = 0.0;
        for (std::size_t i = 0; i < 8; ++i) sum += block.at(i, j);
        CHECK(std::abs(sum - cplx(1.0)) < 1e-9);
    }
}
