#include "modalmatrix/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace modalmatrix {

Dataset::Dataset(std::vector<Matrix> obs) : obs_(std::move(obs)) {
    if (obs_.empty()) throw ParameterError("dataset must hold at least one observation");
    const Matrix& first = obs_.front();
    for (const Matrix& m : obs_) {
        if (!m.same_shape(first))
            throw DimensionError("dataset observations must share one shape");
        if (!m.all_finite())
            throw ParameterError("dataset observations must be finite");
    }
}

namespace {

void check_knn_args(const Matrix& y, const Dataset& data, int k,
                    int exclude_index) {
    if (y.rows() != data.rows() || y.cols() != data.cols())
        throw DimensionError("query shape does not match dataset shape");
    const int candidates =
        data.size() - (exclude_index >= 0 && exclude_index < data.size() ? 1 : 0);
    if (k < 1 || k > candidates)
        throw ParameterError("knn: k must lie in [1, number of candidates]");
}

}  // namespace

NeighborList knn_query(const Matrix& y, const Dataset& data, int k,
                       int exclude_index) {
    check_knn_args(y, data, k, exclude_index);

    std::vector<std::pair<double, int>> cand;
    cand.reserve(static_cast<std::size_t>(data.size()));
    for (int n = 0; n < data.size(); ++n) {
        if (n == exclude_index) continue;
        cand.emplace_back(squared_frobenius_distance(y, data[n]), n);
    }
    // lexicographic (distance, index) order makes ties deterministic
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());

    NeighborList out;
    out.indices.reserve(static_cast<std::size_t>(k));
    out.distances.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        out.indices.push_back(cand[static_cast<std::size_t>(i)].second);
        out.distances.push_back(std::sqrt(cand[static_cast<std::size_t>(i)].first));
    }
    return out;
}

double knn_distance(const Matrix& y, const Dataset& data, int k,
                    int exclude_index) {
    check_knn_args(y, data, k, exclude_index);

    // k-th order statistic only; avoids materializing the full neighbor list
    std::vector<double> d2;
    d2.reserve(static_cast<std::size_t>(data.size()));
    for (int n = 0; n < data.size(); ++n) {
        if (n == exclude_index) continue;
        d2.push_back(squared_frobenius_distance(y, data[n]));
    }
    std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
    return std::sqrt(d2[static_cast<std::size_t>(k - 1)]);
}

Standardized standardize(const Dataset& data) {
    const int n = data.size();
    if (n < 2) throw ParameterError("standardize requires at least two observations");
    const int p = data.rows();
    const int t = data.cols();
    const int d = p * t;

    Matrix center(p, t);
    Matrix scale(p, t);
    for (int i = 0; i < d; ++i) {
        double mean = 0.0;
        for (int obs = 0; obs < n; ++obs) mean += data[obs].data()[i];
        mean /= n;
        double ss = 0.0;
        for (int obs = 0; obs < n; ++obs) {
            const double dev = data[obs].data()[i] - mean;
            ss += dev * dev;
        }
        const double sd = std::sqrt(ss / (n - 1));
        center.data()[i] = mean;
        scale.data()[i] = sd > 0.0 ? sd : 1.0;
    }

    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int obs = 0; obs < n; ++obs) {
        Matrix z(p, t);
        for (int i = 0; i < d; ++i)
            z.data()[i] = (data[obs].data()[i] - center.data()[i]) / scale.data()[i];
        out.push_back(std::move(z));
    }
    return Standardized{Dataset(std::move(out)), std::move(center), std::move(scale)};
}

Matrix destandardize(const Matrix& z, const Matrix& center, const Matrix& scale) {
    require_same_shape(z, center);
    require_same_shape(z, scale);
    Matrix out(z.rows(), z.cols());
    for (int i = 0; i < z.size(); ++i)
        out.data()[i] = z.data()[i] * scale.data()[i] + center.data()[i];
    return out;
}

}  // namespace modalmatrix
