#include "beprod/block_encoding.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace beprod {

void BlockEncoding::validate() const {
    if (total_qubits != circuit.n_wires) {
        throw std::invalid_argument("BlockEncoding: total_qubits != circuit width");
    }
    const std::size_t dim = std::size_t{1} << total_qubits;
    if (rows > dim || cols > dim) {
        throw std::invalid_argument("BlockEncoding: target exceeds 2^total_qubits");
    }
    if (!(alpha > 0.0)) throw std::invalid_argument("BlockEncoding: alpha must be positive");
}

BlockEncoding make_encoding(Circuit c, std::size_t rows, std::size_t cols, double alpha) {
    BlockEncoding be;
    be.total_qubits = c.n_wires;
    be.circuit = std::move(c);
    be.rows = rows;
    be.cols = cols;
    be.alpha = alpha;
    be.validate();
    return be;
}

ComplexMatrix extract_block(const BlockEncoding& be, int max_wires) {
    const ComplexMatrix u = unitary_of(be.circuit, max_wires);
    return scale_ref(top_left_block(u, be.rows, be.cols), be.alpha);
}

VerifyResult verify_encoding(const BlockEncoding& be, const ComplexMatrix& target,
                             const Tolerance& tol, int max_wires) {
    be.validate();
    if (target.rows != be.rows || target.cols != be.cols) {
        throw std::invalid_argument("verify_encoding: target shape mismatch");
    }
    VerifyResult res;
    if (be.circuit.n_wires > max_wires) {
        res.status = VerifyStatus::skipped;
        res.note = "circuit width " + std::to_string(be.circuit.n_wires) +
                   " exceeds verification cap " + std::to_string(max_wires);
        return res;
    }
    res.max_deviation = max_abs_diff(extract_block(be, max_wires), target);
    res.status = res.max_deviation <= tol.abs_eps ? VerifyStatus::pass : VerifyStatus::fail;
    return res;
}

BlockEncoding pad_encoding(const BlockEncoding& be, int new_width) {
    if (new_width < be.total_qubits) {
        throw std::invalid_argument("pad_encoding: cannot shrink an encoding");
    }
    if (new_width == be.total_qubits) return be;
    std::vector<int> map(static_cast<std::size_t>(be.total_qubits));
    const int offset = new_width - be.total_qubits;
    for (int i = 0; i < be.total_qubits; ++i) map[static_cast<std::size_t>(i)] = offset + i;
    return make_encoding(embed(be.circuit, map, new_width), be.rows, be.cols, be.alpha);
}

BlockEncoding adjoint_encoding(const BlockEncoding& be) {
    return make_encoding(adjoint(be.circuit), be.cols, be.rows, be.alpha);
}

BlockEncoding conjugate_encoding(const BlockEncoding& be) {
    return make_encoding(conjugate(be.circuit), be.rows, be.cols, be.alpha);
}

BlockEncoding transpose_encoding(const BlockEncoding& be) {
    return adjoint_encoding(conjugate_encoding(be));
}

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
    Eigen::MatrixXcd m(a.rows, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            m(static_cast<long>(i), static_cast<long>(j)) = a.at(i, j);
    return m;
}

// Hermitian square root of a PSD matrix; tiny negative eigenvalues from
// round-off are clamped to zero.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXd vals = es.eigenvalues();
    for (long i = 0; i < vals.size(); ++i) vals(i) = std::sqrt(std::max(0.0, vals(i)));
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

ComplexMatrix halmos_dilation_matrix(const ComplexMatrix& a, const Tolerance& tol) {
    a.check_finite();
    const double norm = spectral_norm(a);
    if (norm > 1.0 + tol.abs_eps) {
        throw std::invalid_argument("halmos_dilation: spectral norm " + std::to_string(norm) +
                                    " exceeds 1");
    }
    const std::size_t m = a.rows, n = a.cols;
    const Eigen::MatrixXcd am = to_eigen(a);
    const Eigen::MatrixXcd sr =
        psd_sqrt(Eigen::MatrixXcd::Identity(static_cast<long>(m), static_cast<long>(m)) -
                 am * am.adjoint());
    const Eigen::MatrixXcd sc =
        psd_sqrt(Eigen::MatrixXcd::Identity(static_cast<long>(n), static_cast<long>(n)) -
                 am.adjoint() * am);

    std::size_t dim = 1;
    while (dim < m + n) dim <<= 1;
    ComplexMatrix u(dim, dim);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) u.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            u.at(i, n + j) = sr(static_cast<long>(i), static_cast<long>(j));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            u.at(m + i, j) = sc(static_cast<long>(i), static_cast<long>(j));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            u.at(m + i, n + j) = -std::conj(a.at(j, i));
    for (std::size_t i = m + n; i < dim; ++i) u.at(i, i) = 1.0;
    return u;
}

BlockEncoding halmos_dilation(const ComplexMatrix& a, const std::string& label,
                              const Tolerance& tol) {
    ComplexMatrix u = halmos_dilation_matrix(a, tol);
    int wires = 0;
    while ((std::size_t{1} << wires) < u.rows) ++wires;
    wires = std::max(wires, 1);
    std::vector<int> targets(static_cast<std::size_t>(wires));
    for (int i = 0; i < wires; ++i) targets[static_cast<std::size_t>(i)] = i;
    Circuit c(wires);
    c.add(Gate::oracle(label, std::move(u), targets));
    return make_encoding(std::move(c), a.rows, a.cols, 1.0);
}

}  // namespace beprod
