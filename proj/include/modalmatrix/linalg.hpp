#pragma once

#include <optional>

#include "modalmatrix/matrix.hpp"

namespace modalmatrix {

Matrix matmul(const Matrix& a, const Matrix& b);    // A * B
Matrix matmul_nt(const Matrix& a, const Matrix& b); // A * B'
Matrix matmul_tn(const Matrix& a, const Matrix& b); // A' * B

struct CholeskyFactor {
    Matrix l;       // lower triangular, A = L L'
    double log_det; // log |A|
};

// nullopt when the input is not square, not symmetric (within a small
// relative tolerance) or not positive definite.
std::optional<CholeskyFactor> cholesky(const Matrix& a);

// Solves L W = B for W (L lower triangular).
Matrix solve_lower_left(const Matrix& l, const Matrix& b);

// Solves W L' = B for W (L lower triangular).
Matrix solve_lower_right_transposed(const Matrix& b, const Matrix& l);

}  // namespace modalmatrix
