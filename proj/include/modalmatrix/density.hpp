#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "modalmatrix/dataset.hpp"
#include "modalmatrix/kernels.hpp"
#include "modalmatrix/linalg.hpp"

namespace modalmatrix {

struct FixedBandwidth {
    double h = 1.0;
};

// Row and column bandwidth matrices of the separable (Kronecker) form;
// both act as covariance-like scales, so the scalar case U = h^2 I_P,
// V = h^2 I_T matches FixedBandwidth{h * h}... see density_at docs.
struct SeparableBandwidth {
    Matrix row_scale; // U, P x P, SPD
    Matrix col_scale; // V, T x T, SPD
};

struct BalloonBandwidth {
    int k = 2; // bandwidth = distance from the query to its k-th neighbor
};

struct SamplePointBandwidth {
    int k = 2;
    double h = 1.0; // per-point bandwidth = h * delta_k(X_n), self excluded
};

using BandwidthSpec =
    std::variant<FixedBandwidth, SeparableBandwidth, BalloonBandwidth,
                 SamplePointBandwidth>;

struct EstimatorConfig {
    BandwidthSpec bandwidth = FixedBandwidth{};
    KernelFamily kernel = KernelFamily::GaussianMatrixNormal;
};

// Immutable after fit(); evaluation methods are pure and thread-safe.
class FittedEstimator {
public:
    // Pointwise estimates. density_at works in the linear domain and may
    // underflow to zero for large P*T; log_density_at accumulates with a
    // max-shifted sum of exponentials and is the high-dimensional path.
    double density_at(const Matrix& y) const;
    double log_density_at(const Matrix& y) const;

    const Dataset& data() const noexcept { return *data_; }
    const EstimatorConfig& config() const noexcept { return config_; }
    KernelSpec kernel_spec() const noexcept {
        return {config_.kernel, data_->dim()};
    }

    // Cached h * delta_k(X_n) values; empty unless SamplePoint.
    const std::vector<double>& sample_point_bandwidths() const noexcept {
        return sp_bandwidths_;
    }

    // Cached factorizations; only populated for Separable.
    const CholeskyFactor& row_factor() const { return row_factor_; }
    const CholeskyFactor& col_factor() const { return col_factor_; }

private:
    friend FittedEstimator fit(EstimatorConfig config, Dataset data);
    FittedEstimator() = default;

    EstimatorConfig config_;
    std::shared_ptr<const Dataset> data_;
    std::vector<double> sp_bandwidths_;
    CholeskyFactor row_factor_;
    CholeskyFactor col_factor_;
};

// Validates the configuration against the data and precomputes caches.
// Sample-point fits fail with DegenerateBandwidthError (naming the offending
// indices) when duplicated observations force delta_k(X_n) = 0.
FittedEstimator fit(EstimatorConfig config, Dataset data);

// Minimizer of the asymptotic MISE
//   N^-1 h^-d R(K) + (1/4) h^4 m2(K)^2 R(laplacian f):
//   h = [ d R(K) / (m2^2 R(laplacian f)) ]^(1/(d+4)) * N^(-1/(d+4)).
double amise_bandwidth(int n, int dim, double r_k, double m2_k,
                       double r_laplacian_f);

// Normal-reference scalar bandwidth for estimating the density gradient:
//   h = sigma_hat * [ 4 / (N (d+4)) ]^(1/(d+6)),
// sigma_hat = mean of the entrywise sample standard deviations.
double normal_scale_gradient_bandwidth(const Dataset& data);

enum class KnnRule { Half, One, Five }; // k = round(c sqrt(N)), c in {0.5, 1, 5}

double knn_rule_factor(KnnRule rule);

// round(c sqrt(N)) clamped to [2, N-1].
int choose_k(KnnRule rule, int n);

}  // namespace modalmatrix
