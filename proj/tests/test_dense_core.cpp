#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numbers>

#include "beprod/block_encoding.hpp"
#include "beprod/complex_matrix.hpp"
#include "beprod/simulate.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace beprod;
using beprod::testing::random_contraction;
using beprod::testing::random_matrix;

namespace {

// Independent oracle: same product, different loop order with explicit
// accumulation.
ComplexMatrix matmul_naive(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
            c.at(i, j) = acc;
        }
    return c;
}

std::vector<cplx> dft(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                               static_cast<double>(n);
            s += x[j] * std::polar(1.0, ang);
        }
        out[k] = s;
    }
    return out;
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("matmul_ref identities") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(matrices_close(matmul_ref(i2, i2), i2));
    CHECK(matrices_close(matmul_ref(pauli_x(), pauli_x()), i2));
    CHECK_THROWS_AS(matmul_ref(ComplexMatrix(2, 3), ComplexMatrix(2, 2)), std::invalid_argument);
}

TEST_CASE("matmul_ref against independent triple loop") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_matrix(rng, 3, 5);
        const ComplexMatrix b = random_matrix(rng, 5, 2);
        CHECK(max_abs_diff(matmul_ref(a, b), matmul_naive(a, b)) < 1e-13);
    }
}

TEST_CASE("kron_ref identities and index formula") {
    CHECK(matrices_close(kron_ref(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                         ComplexMatrix::identity(4)));

    ComplexMatrix proj(2, 2);
    proj.at(0, 0) = 1.0;
    const ComplexMatrix px = kron_ref(proj, pauli_x());
    ComplexMatrix want(4, 4);
    want.at(0, 1) = 1.0;
    want.at(1, 0) = 1.0;
    CHECK(matrices_close(px, want));

    std::mt19937_64 rng(7);
    const ComplexMatrix a = random_matrix(rng, 2, 3);
    const ComplexMatrix b = random_matrix(rng, 3, 2);
    const ComplexMatrix k = kron_ref(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t p = 0; p < 3; ++p)
                for (std::size_t q = 0; q < 2; ++q) {
                    CHECK(std::abs(k.at(i * 3 + p, j * 2 + q) - a.at(i, j) * b.at(p, q)) < 1e-15);
                }
}

TEST_CASE("kron_ref associativity") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_matrix(rng, 1 + rng() % 4, 1 + rng() % 4);
        const auto b = random_matrix(rng, 1 + rng() % 4, 1 + rng() % 4);
        const auto c = random_matrix(rng, 1 + rng() % 4, 1 + rng() % 4);
        CHECK(max_abs_diff(kron_ref(a, kron_ref(b, c)), kron_ref(kron_ref(a, b), c)) < 1e-12);
    }
}

TEST_CASE("hadamard_ref") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(matrices_close(hadamard_ref(i2, i2), i2));
    CHECK_THROWS_AS(hadamard_ref(ComplexMatrix(2, 2), ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("circular_conv_ref: delta is the identity and the Fourier relation holds") {
    std::mt19937_64 rng(19);
    for (std::size_t n : {2, 4, 8, 16, 32, 64}) {
        std::vector<cplx> delta(n, 0.0);
        delta[0] = 1.0;
        const auto x = beprod::testing::random_state(rng, n);
        const auto conv = circular_conv_ref(delta, x);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(conv[i] - x[i]) < 1e-12);

        const auto y = beprod::testing::random_state(rng, n);
        auto fx = dft(x, -1), fy = dft(y, -1);
        for (std::size_t i = 0; i < n; ++i) fx[i] *= fy[i];
        auto through_fourier = dft(fx, +1);
        for (cplx& z : through_fourier) z /= static_cast<double>(n);
        const auto direct = circular_conv_ref(x, y);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(direct[i] - through_fourier[i]) < 1e-10);
    }
    CHECK_THROWS_AS(circular_conv_ref(std::vector<cplx>(3), std::vector<cplx>(3)),
                    std::invalid_argument);
}

TEST_CASE("vec_ref stacks columns") {
    ComplexMatrix a(2, 2);
    a.at(0, 0) = 1.0;
    a.at(0, 1) = 2.0;
    a.at(1, 0) = 3.0;
    a.at(1, 1) = 4.0;
    const auto v = vec_ref(a);
    CHECK(v == std::vector<cplx>{1.0, 3.0, 2.0, 4.0});
}

TEST_CASE("vectorization identity vec(AXB) = (B^T kron A) vec(X)") {
    std::mt19937_64 rng(23);
    for (std::size_t n : {2, 3}) {
        const auto a = random_matrix(rng, n, n);
        const auto x = random_matrix(rng, n, n);
        const auto b = random_matrix(rng, n, n);
        const auto lhs = vec_ref(matmul_ref(matmul_ref(a, x), b));
        const ComplexMatrix op = kron_ref(transpose_ref(b), a);
        const auto vx = vec_ref(x);
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < vx.size(); ++j) s += op.at(i, j) * vx[j];
            CHECK(std::abs(lhs[i] - s) < 1e-10);
        }
    }
}

TEST_CASE("top_left_block") {
    CHECK(matrices_close(top_left_block(ComplexMatrix::identity(4), 2, 2),
                         ComplexMatrix::identity(2)));
    ComplexMatrix h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h.entries = {r, r, r, -r};
    const ComplexMatrix hh = kron_ref(h, h);
    const ComplexMatrix b = top_left_block(hh, 1, 1);
    CHECK(std::abs(b.at(0, 0) - cplx(0.5)) < 1e-15);
    CHECK_THROWS_AS(top_left_block(h, 3, 1), std::invalid_argument);
}

TEST_CASE("is_unitary and matrices_close") {
    CHECK(is_unitary(ComplexMatrix::identity(8)));
    CHECK_FALSE(is_unitary(scale_ref(ComplexMatrix::identity(2), 1.001)));
}

TEST_CASE("halmos_dilation of a unitary is block diagonal") {
    // H (x) H is unitary exactly in floating point, so the defect blocks
    // vanish identically.
    ComplexMatrix h(2, 2);
    const double r = 0.5;
    ComplexMatrix u(4, 4);
    const double sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) u.at(i, j) = sign[i][j] * r;
    const ComplexMatrix d = halmos_dilation_matrix(u);
    CHECK(d.rows == 8);
    CHECK(unitarity_defect(d) < 1e-12);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(std::abs(d.at(i, 4 + j)) < 1e-12);
            CHECK(std::abs(d.at(4 + i, j)) < 1e-12);
            CHECK(std::abs(d.at(i, j) - u.at(i, j)) < 1e-12);
            CHECK(std::abs(d.at(4 + i, 4 + j) + std::conj(u.at(j, i))) < 1e-12);
        }

    // A merely numerically unitary input amplifies round-off through the
    // square root; the defect floor sits orders of magnitude above eps.
    std::mt19937_64 rng(31);
    const ComplexMatrix v = beprod::testing::random_unitary(rng, 2);
    CHECK(unitarity_defect(halmos_dilation_matrix(v)) < 1e-6);
}

TEST_CASE("halmos_dilation of a scalar") {
    ComplexMatrix a(1, 1);
    a.at(0, 0) = 0.5;
    const ComplexMatrix d = halmos_dilation_matrix(a);
    CHECK(d.rows == 2);
    CHECK(std::abs(d.at(0, 0) - cplx(0.5)) < 1e-15);
    CHECK(unitarity_defect(d) < 1e-12);
}

TEST_CASE("halmos_dilation of random rectangles") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_contraction(rng, 3, 5);
        const BlockEncoding be = halmos_dilation(a);
        CHECK(be.total_qubits == 3);
        const ComplexMatrix u = unitary_of(be.circuit);
        CHECK(is_unitary(u, Tolerance(1e-10)));
        CHECK(max_abs_diff(top_left_block(u, 3, 5), a) < 1e-10);
        // The square-root factor actually squares to the defect operator.
        const ComplexMatrix d = halmos_dilation_matrix(a);
        ComplexMatrix sr(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) sr.at(i, j) = d.at(i, 5 + j);
        const ComplexMatrix sr2 = matmul_ref(sr, sr);
        const ComplexMatrix want = add_ref(ComplexMatrix::identity(3),
                                           scale_ref(matmul_ref(a, adjoint_ref(a)), -1.0));
        CHECK(max_abs_diff(sr2, want) < 1e-10);
    }
    ComplexMatrix big(1, 1);
    big.at(0, 0) = 1.5;
    CHECK_THROWS_AS(halmos_dilation(big), std::invalid_argument);
}

TEST_CASE("spectral_norm sanity") {
    ComplexMatrix a(1, 2);
    a.at(0, 0) = 3.0;
    a.at(0, 1) = 4.0;
    CHECK(std::abs(spectral_norm(a) - 5.0) < 1e-12);
}

TEST_CASE("matrix JSON round trip") {
    std::mt19937_64 rng(41);
    const ComplexMatrix a = random_matrix(rng, 3, 2);
    const ComplexMatrix b = matrix_from_json(matrix_to_json(a));
    CHECK(a == b);
    CHECK_THROWS(matrix_from_json("{\"rows\": 2, \"cols\": 2, \"entries\": [[1, 0]]}"));
}
