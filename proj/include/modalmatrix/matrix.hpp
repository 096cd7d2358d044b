#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "modalmatrix/errors.hpp"

namespace modalmatrix {

// One P x T real matrix observation, row-major storage.
class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          entries_(static_cast<std::size_t>(check_dims(rows, cols)), 0.0) {}

    Matrix(int rows, int cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (static_cast<std::size_t>(check_dims(rows, cols)) != entries_.size())
            throw DimensionError("matrix entry count does not match shape");
    }

    static Matrix constant(int rows, int cols, double value) {
        Matrix m(rows, cols);
        for (double& e : m.entries_) e = value;
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int size() const noexcept { return rows_ * cols_; }

    double operator()(int p, int t) const { return entries_[idx(p, t)]; }
    double& operator()(int p, int t) { return entries_[idx(p, t)]; }

    const double* data() const noexcept { return entries_.data(); }
    double* data() noexcept { return entries_.data(); }
    std::span<const double> span() const noexcept { return entries_; }

    bool same_shape(const Matrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool all_finite() const noexcept {
        for (double e : entries_)
            if (!std::isfinite(e)) return false;
        return true;
    }

private:
    static int check_dims(int rows, int cols) {
        if (rows < 1 || cols < 1)
            throw DimensionError("matrix dimensions must be positive");
        return rows * cols;
    }

    std::size_t idx(int p, int t) const noexcept {
        return static_cast<std::size_t>(p) * cols_ + t;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> entries_;
};

inline void require_same_shape(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw DimensionError("matrix shapes differ");
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix out(a.rows(), a.cols());
    for (int i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix out(a.rows(), a.cols());
    for (int i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

inline Matrix operator*(double s, const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (int i = 0; i < a.size(); ++i) out.data()[i] = s * a.data()[i];
    return out;
}

inline Matrix& operator+=(Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    for (int i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
    return a;
}

// y += s * x, without a temporary.
inline void axpy(double s, const Matrix& x, Matrix& y) {
    require_same_shape(x, y);
    for (int i = 0; i < x.size(); ++i) y.data()[i] += s * x.data()[i];
}

inline double squared_frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (int i = 0; i < a.size(); ++i) acc += a.data()[i] * a.data()[i];
    return acc;
}

inline double frobenius_norm(const Matrix& a) {
    return std::sqrt(squared_frobenius_norm(a));
}

inline double squared_frobenius_distance(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    double acc = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        acc += d * d;
    }
    return acc;
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
    return std::sqrt(squared_frobenius_distance(a, b));
}

}  // namespace modalmatrix
