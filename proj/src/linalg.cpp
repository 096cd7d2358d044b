#include "modalmatrix/linalg.hpp"

#include <cmath>

namespace modalmatrix {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("matmul_nt: inner dimensions differ");
    Matrix out(a.rows(), b.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
            out(i, j) = acc;
        }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("matmul_tn: inner dimensions differ");
    Matrix out(a.cols(), b.cols());
    for (int k = 0; k < a.rows(); ++k)
        for (int i = 0; i < a.cols(); ++i) {
            const double aki = a(k, i);
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aki * b(k, j);
        }
    return out;
}

std::optional<CholeskyFactor> cholesky(const Matrix& a) {
    const int n = a.rows();
    if (n != a.cols()) return std::nullopt;

    double max_abs = 0.0;
    for (int i = 0; i < a.size(); ++i)
        max_abs = std::max(max_abs, std::fabs(a.data()[i]));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(a(i, j) - a(j, i)) > 1e-10 * std::max(1.0, max_abs))
                return std::nullopt;

    Matrix l(n, n);
    double log_det = 0.0;
    for (int j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) return std::nullopt;
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        log_det += 2.0 * std::log(ljj);
        for (int i = j + 1; i < n; ++i) {
            double acc = a(i, j);
            for (int k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / ljj;
        }
    }
    return CholeskyFactor{std::move(l), log_det};
}

Matrix solve_lower_left(const Matrix& l, const Matrix& b) {
    if (l.rows() != l.cols() || l.rows() != b.rows())
        throw DimensionError("solve_lower_left: dimension mismatch");
    Matrix w = b;
    const int n = l.rows();
    for (int j = 0; j < b.cols(); ++j)
        for (int i = 0; i < n; ++i) {
            double acc = w(i, j);
            for (int k = 0; k < i; ++k) acc -= l(i, k) * w(k, j);
            w(i, j) = acc / l(i, i);
        }
    return w;
}

Matrix solve_lower_right_transposed(const Matrix& b, const Matrix& l) {
    if (l.rows() != l.cols() || l.rows() != b.cols())
        throw DimensionError("solve_lower_right_transposed: dimension mismatch");
    // W L' = B row by row: (L W_i' = B_i') with forward substitution
    Matrix w = b;
    const int n = l.rows();
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < n; ++j) {
            double acc = w(i, j);
            for (int k = 0; k < j; ++k) acc -= l(j, k) * w(i, k);
            w(i, j) = acc / l(j, j);
        }
    return w;
}

}  // namespace modalmatrix
