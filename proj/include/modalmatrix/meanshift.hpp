#pragma once

#include <functional>
#include <vector>

#include "modalmatrix/density.hpp"

namespace modalmatrix {

struct MeanShiftConfig {
    double tol = 1e-7; // relative Frobenius step threshold
    int max_iter = 500;
    double merge_radius_factor = 0.5; // times the estimator's bandwidth scale
};

// One mean-shift update of y under the fitted estimator. Fixed, Separable
// and SamplePoint require the Gaussian kernel (softmax weights computed in
// the log domain); Balloon requires the uniform-ball kernel and takes the
// nearest-neighbor-mean form.
Matrix ms_step(const FittedEstimator& est, const Matrix& y);

// Mean of the k nearest data points to y (no exclusion, ties by index).
// Closed form of the balloon/uniform-ball mean-shift update.
Matrix ms_step_knn_uniform(const Dataset& data, int k, const Matrix& y);

struct AscentResult {
    Matrix mode;
    int iterations = 0;
    bool converged = false;
};

// Iterates y <- step(y) until ||y' - y||_F < tol * (1 + ||y||_F) or
// max_iter steps have been taken.
AscentResult ascend(const std::function<Matrix(const Matrix&)>& step,
                    Matrix y0, const MeanShiftConfig& cfg);

struct ModeMerge {
    std::vector<int> representatives; // per component: index into the input list
    std::vector<int> assignment;      // per input mode: component id in [0, M)
};

// Single-linkage connected components under Frobenius distance <= radius.
// The representative of a component is its member with the highest score
// (estimated log density), ties broken by lower index. Component ids follow
// the order of each component's smallest member index.
ModeMerge merge_modes(const std::vector<Matrix>& modes,
                      const std::vector<double>& scores, double radius);

struct ClusterResult {
    std::vector<int> labels;      // N values in [0, M)
    std::vector<Matrix> modes;    // M representative matrices
    std::vector<int> iterations;  // per-observation ascent length
    std::vector<bool> converged;  // per-observation convergence flag
    std::vector<double> mode_log_density;
};

// Full modal clustering: ascend from every observation, merge terminal
// points, label by representative. Deterministic for fixed inputs and any
// thread count.
ClusterResult cluster(const Dataset& data, const EstimatorConfig& est_config,
                      const MeanShiftConfig& cfg, int threads = 1);

// Global bandwidth scale used for the merge radius: h for Fixed and
// SamplePoint, mean k-NN radius over the data for Balloon, and the
// determinant-based effective scalar bandwidth for Separable.
double merge_scale(const FittedEstimator& est);

}  // namespace modalmatrix
