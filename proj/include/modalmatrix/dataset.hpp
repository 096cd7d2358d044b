#pragma once

#include <vector>

#include "modalmatrix/matrix.hpp"

namespace modalmatrix {

// Ordered, immutable collection of N observations sharing one (P, T) shape.
class Dataset {
public:
    explicit Dataset(std::vector<Matrix> obs);

    int size() const noexcept { return static_cast<int>(obs_.size()); }
    int rows() const noexcept { return obs_.front().rows(); }
    int cols() const noexcept { return obs_.front().cols(); }
    int dim() const noexcept { return rows() * cols(); }

    const Matrix& operator[](int n) const { return obs_[static_cast<std::size_t>(n)]; }
    const std::vector<Matrix>& observations() const noexcept { return obs_; }

private:
    std::vector<Matrix> obs_;
};

struct NeighborList {
    std::vector<int> indices;      // distinct, into the dataset
    std::vector<double> distances; // nondecreasing, same length as indices
};

inline constexpr int kNoExclude = -1;

// Exact k nearest neighbors of y under Frobenius distance, brute force.
// Ties are broken by lower dataset index; exclude_index (when >= 0) removes
// that observation from the candidate set.
NeighborList knn_query(const Matrix& y, const Dataset& data, int k,
                       int exclude_index = kNoExclude);

// Distance to the k-th nearest neighbor (last entry of knn_query).
double knn_distance(const Matrix& y, const Dataset& data, int k,
                    int exclude_index = kNoExclude);

struct Standardized {
    Dataset data;
    Matrix center; // entrywise sample mean
    Matrix scale;  // entrywise sample sd; 1 where the entry is constant
};

// Entrywise z-scores across the sample; requires N >= 2.
Standardized standardize(const Dataset& data);

// Inverse of the standardize transform for a single matrix.
Matrix destandardize(const Matrix& z, const Matrix& center, const Matrix& scale);

}  // namespace modalmatrix
