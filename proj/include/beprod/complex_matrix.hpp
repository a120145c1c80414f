#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace beprod {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Backbone of all classical reference
/// computations and circuit verification.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> entries;  // rows * cols, row-major

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    ComplexMatrix(std::size_t r, std::size_t c, std::vector<cplx> e);

    cplx& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t r, std::size_t c) { return ComplexMatrix(r, c); }

    bool operator==(const ComplexMatrix& o) const = default;

    /// Throws if any entry is NaN or infinite.
    void check_finite() const;
};

struct Tolerance {
    double abs_eps = 1e-10;
    explicit Tolerance(double eps = 1e-10);
};

ComplexMatrix matmul_ref(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_ref(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hadamard_ref(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint_ref(const ComplexMatrix& a);
ComplexMatrix transpose_ref(const ComplexMatrix& a);
ComplexMatrix conjugate_ref(const ComplexMatrix& a);
ComplexMatrix scale_ref(const ComplexMatrix& a, cplx factor);
ComplexMatrix add_ref(const ComplexMatrix& a, const ComplexMatrix& b);

/// Circular convolution (x*y)_i = sum_j x_j y_{(i-j) mod N}. Lengths must
/// match and be a power of two.
std::vector<cplx> circular_conv_ref(const std::vector<cplx>& x, const std::vector<cplx>& y);

/// Stacks the columns of a into a single vector of length rows*cols.
std::vector<cplx> vec_ref(const ComplexMatrix& a);

/// Leading m x n submatrix.
ComplexMatrix top_left_block(const ComplexMatrix& u, std::size_t m, std::size_t n);

/// Max-entry deviation of u^dagger u from the identity.
double unitarity_defect(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, const Tolerance& tol = Tolerance());

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool matrices_close(const ComplexMatrix& a, const ComplexMatrix& b,
                    const Tolerance& tol = Tolerance());

/// Largest singular value.
double spectral_norm(const ComplexMatrix& a);

/// Matrix JSON: {"rows": M, "cols": N, "entries": [[re, im], ...]} row-major.
std::string matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const std::string& text);
ComplexMatrix load_matrix_file(const std::string& path);
void save_matrix_file(const ComplexMatrix& a, const std::string& path);

}  // namespace beprod
