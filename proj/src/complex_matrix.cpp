#include "beprod/complex_matrix.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace beprod {

ComplexMatrix::ComplexMatrix(std::size_t r, std::size_t c, std::vector<cplx> e)
    : rows(r), cols(c), entries(std::move(e)) {
    if (entries.size() != rows * cols) {
        throw std::invalid_argument("ComplexMatrix: entries length " +
                                    std::to_string(entries.size()) + " != " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

void ComplexMatrix::check_finite() const {
    for (const cplx& z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("ComplexMatrix: non-finite entry");
        }
    }
}

Tolerance::Tolerance(double eps) : abs_eps(eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("Tolerance: abs_eps must be >= 0");
}

ComplexMatrix matmul_ref(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul_ref: inner dimensions " + std::to_string(a.cols) +
                                    " vs " + std::to_string(b.rows));
    }
    ComplexMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                c.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return c;
}

ComplexMatrix kron_ref(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const cplx aij = a.at(i, j);
            if (aij == cplx(0.0)) continue;
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l)
                    c.at(i * b.rows + k, j * b.cols + l) = aij * b.at(k, l);
        }
    return c;
}

ComplexMatrix hadamard_ref(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument("hadamard_ref: shape mismatch");
    }
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = a.entries[i] * b.entries[i];
    return c;
}

ComplexMatrix adjoint_ref(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) c.at(j, i) = std::conj(a.at(i, j));
    return c;
}

ComplexMatrix transpose_ref(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) c.at(j, i) = a.at(i, j);
    return c;
}

ComplexMatrix conjugate_ref(const ComplexMatrix& a) {
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = std::conj(a.entries[i]);
    return c;
}

ComplexMatrix scale_ref(const ComplexMatrix& a, cplx factor) {
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = factor * a.entries[i];
    return c;
}

ComplexMatrix add_ref(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("add_ref: shape mismatch");
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = a.entries[i] + b.entries[i];
    return c;
}

std::vector<cplx> circular_conv_ref(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    const std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("circular_conv_ref: length mismatch");
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("circular_conv_ref: length must be a power of two");
    }
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += x[j] * y[(i - j + n) % n];
        out[i] = s;
    }
    return out;
}

std::vector<cplx> vec_ref(const ComplexMatrix& a) {
    std::vector<cplx> v(a.rows * a.cols);
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t i = 0; i < a.rows; ++i) v[j * a.rows + i] = a.at(i, j);
    return v;
}

ComplexMatrix top_left_block(const ComplexMatrix& u, std::size_t m, std::size_t n) {
    if (m > u.rows || n > u.cols) throw std::invalid_argument("top_left_block: block exceeds matrix");
    ComplexMatrix c(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) c.at(i, j) = u.at(i, j);
    return c;
}

double unitarity_defect(const ComplexMatrix& u) {
    if (u.rows != u.cols) throw std::invalid_argument("unitarity_defect: matrix not square");
    const std::size_t n = u.rows;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += std::conj(u.at(k, i)) * u.at(k, j);
            if (i == j) s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

bool is_unitary(const ComplexMatrix& u, const Tolerance& tol) {
    return unitarity_defect(u) <= tol.abs_eps;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
    }
    return worst;
}

bool matrices_close(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
    return max_abs_diff(a, b) <= tol.abs_eps;
}

double spectral_norm(const ComplexMatrix& a) {
    Eigen::MatrixXcd m(a.rows, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) m(static_cast<long>(i), static_cast<long>(j)) = a.at(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

std::string matrix_to_json(const ComplexMatrix& a) {
    nlohmann::json j;
    j["rows"] = a.rows;
    j["cols"] = a.cols;
    auto& ent = j["entries"] = nlohmann::json::array();
    for (const cplx& z : a.entries) ent.push_back({z.real(), z.imag()});
    return j.dump();
}

static ComplexMatrix matrix_from_parsed(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto& ent = j.at("entries");
    if (ent.size() != rows * cols) {
        throw std::invalid_argument("matrix JSON: entries length mismatch");
    }
    std::vector<cplx> e;
    e.reserve(ent.size());
    for (const auto& pair : ent) e.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    ComplexMatrix m(rows, cols, std::move(e));
    m.check_finite();
    return m;
}

ComplexMatrix matrix_from_json(const std::string& text) {
    return matrix_from_parsed(nlohmann::json::parse(text));
}

ComplexMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return matrix_from_json(ss.str());
}

void save_matrix_file(const ComplexMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    out << matrix_to_json(a) << "\n";
}

}  // namespace beprod
