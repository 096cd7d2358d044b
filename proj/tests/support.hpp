// Shared helpers for the test suites: quadrature, finite differences,
// random data generation and a Kolmogorov-Smirnov statistic. These are the
// independent oracles the tests check the library against, so nothing here
// may call back into the code paths under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "modalmatrix/dataset.hpp"
#include "modalmatrix/rng.hpp"

namespace testsupport {

// Composite Simpson on [a, b] with n subintervals (n made even).
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Tensor-product Simpson over [a, b]^2.
inline double simpson2d(const std::function<double(double, double)>& f,
                        double a, double b, int n) {
    return simpson(
        [&](double x) {
            return simpson([&](double y) { return f(x, y); }, a, b, n);
        },
        a, b, n);
}

// Fourth-order central difference.
inline double finite_difference(const std::function<double(double)>& f,
                                double x, double step) {
    return (8.0 * (f(x + step) - f(x - step)) -
            (f(x + 2 * step) - f(x - 2 * step))) /
           (12.0 * step);
}

inline modalmatrix::Matrix random_matrix(int p, int t, modalmatrix::SplitMix64& rng,
                                         double scale = 1.0) {
    modalmatrix::Matrix m(p, t);
    for (int i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.next_normal();
    return m;
}

inline modalmatrix::Dataset random_dataset(int n, int p, int t,
                                           modalmatrix::SplitMix64& rng,
                                           double scale = 1.0) {
    std::vector<modalmatrix::Matrix> obs;
    obs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) obs.push_back(random_matrix(p, t, rng, scale));
    return modalmatrix::Dataset(std::move(obs));
}

// Two well-separated groups around +-offset/2 on every entry.
inline modalmatrix::Dataset two_blob_dataset(int n_each, int p, int t,
                                             double offset, double spread,
                                             modalmatrix::SplitMix64& rng,
                                             std::vector<int>* truth = nullptr) {
    std::vector<modalmatrix::Matrix> obs;
    for (int g = 0; g < 2; ++g) {
        const double center = (g == 0 ? -0.5 : 0.5) * offset;
        for (int i = 0; i < n_each; ++i) {
            modalmatrix::Matrix m(p, t);
            for (int j = 0; j < m.size(); ++j)
                m.data()[j] = center + spread * rng.next_normal();
            obs.push_back(std::move(m));
            if (truth != nullptr) truth->push_back(g);
        }
    }
    return modalmatrix::Dataset(std::move(obs));
}

inline double cosine_similarity(const modalmatrix::Matrix& a,
                                const modalmatrix::Matrix& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        dot += a.data()[i] * b.data()[i];
        na += a.data()[i] * a.data()[i];
        nb += b.data()[i] * b.data()[i];
    }
    return dot / std::sqrt(na * nb);
}

inline double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// One-sample KS statistic against N(0, 1).
inline double ks_statistic_normal(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double cdf = standard_normal_cdf(values[i]);
        d = std::max(d, std::fabs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - cdf));
    }
    return d;
}

// Stephens' finite-sample scaling; compare against 1.6276 for alpha = 0.01.
inline double ks_scaled(double d, std::size_t n) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    return d * (sqrt_n + 0.12 + 0.11 / sqrt_n);
}

// Same co-membership structure up to relabeling.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    return true;
}

}  // namespace testsupport
