#include "modalmatrix/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace modalmatrix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& terms) {
    double max_term = -kInf;
    for (double t : terms) max_term = std::max(max_term, t);
    if (max_term == -kInf) return -kInf;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return max_term + std::log(acc);
}

// Whitened squared distance tr(V^-1 D' U^-1 D) = ||L_U^-1 D L_V^-T||_F^2.
double separable_sq_dist(const CholeskyFactor& row_f, const CholeskyFactor& col_f,
                         const Matrix& diff) {
    const Matrix w1 = solve_lower_left(row_f.l, diff);
    const Matrix w = solve_lower_right_transposed(w1, col_f.l);
    return squared_frobenius_norm(w);
}

// k-th smallest squared distance, kept unrooted so the ratio u = d^2 / r^2
// is exactly 1 at the defining neighbor (the uniform kernel has a hard
// boundary there).
double kth_squared_distance(const Matrix& y, const Dataset& ds, int k) {
    std::vector<double> d2;
    d2.reserve(static_cast<std::size_t>(ds.size()));
    for (int i = 0; i < ds.size(); ++i)
        d2.push_back(squared_frobenius_distance(y, ds[i]));
    std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
    return d2[static_cast<std::size_t>(k - 1)];
}

}  // namespace

FittedEstimator fit(EstimatorConfig config, Dataset data) {
    FittedEstimator est;
    est.config_ = config;
    est.data_ = std::make_shared<const Dataset>(std::move(data));
    const Dataset& ds = *est.data_;
    const int n = ds.size();

    if (const auto* fixed = std::get_if<FixedBandwidth>(&config.bandwidth)) {
        if (!(fixed->h > 0.0)) throw ParameterError("fixed bandwidth must be positive");
    } else if (const auto* sep = std::get_if<SeparableBandwidth>(&config.bandwidth)) {
        if (config.kernel != KernelFamily::GaussianMatrixNormal)
            throw ParameterError("separable estimator supports the Gaussian kernel only");
        if (sep->row_scale.rows() != ds.rows() || sep->col_scale.rows() != ds.cols())
            throw DimensionError("separable bandwidth matrices must be P x P and T x T");
        auto row_f = cholesky(sep->row_scale);
        auto col_f = cholesky(sep->col_scale);
        if (!row_f || !col_f)
            throw ParameterError("separable bandwidth matrices must be symmetric positive definite");
        est.row_factor_ = std::move(*row_f);
        est.col_factor_ = std::move(*col_f);
    } else if (const auto* bal = std::get_if<BalloonBandwidth>(&config.bandwidth)) {
        // k = N is allowed: the radius is then the distance to the farthest point
        if (bal->k < 2 || bal->k > n)
            throw ParameterError("balloon k must lie in [2, N]");
    } else if (const auto* sp = std::get_if<SamplePointBandwidth>(&config.bandwidth)) {
        if (!(sp->h > 0.0)) throw ParameterError("sample-point h must be positive");
        if (sp->k < 2 || sp->k > n - 1)
            throw ParameterError("sample-point k must lie in [2, N-1]");
        est.sp_bandwidths_.resize(static_cast<std::size_t>(n));
        std::vector<int> degenerate;
        for (int i = 0; i < n; ++i) {
            const double delta = knn_distance(ds[i], ds, sp->k, i);
            if (delta == 0.0) degenerate.push_back(i);
            est.sp_bandwidths_[static_cast<std::size_t>(i)] = sp->h * delta;
        }
        if (!degenerate.empty()) {
            std::ostringstream msg;
            msg << "sample-point bandwidth degenerates (delta_k = 0) at indices";
            for (int i : degenerate) msg << ' ' << i;
            throw DegenerateBandwidthError(msg.str(), std::move(degenerate));
        }
    }
    return est;
}

double FittedEstimator::density_at(const Matrix& y) const {
    const Dataset& ds = *data_;
    if (y.rows() != ds.rows() || y.cols() != ds.cols())
        throw DimensionError("query shape does not match fitted data");
    const int n = ds.size();
    const int d = ds.dim();
    const KernelSpec spec = kernel_spec();

    if (const auto* fixed = std::get_if<FixedBandwidth>(&config_.bandwidth)) {
        const double h = fixed->h;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = squared_frobenius_distance(y, ds[i]) / (h * h);
            acc += 0.5 * profile(spec, u).kappa;
        }
        return acc / (n * std::pow(h, d));
    }
    if (std::holds_alternative<SeparableBandwidth>(config_.bandwidth)) {
        const double log_pref = -0.5 * ds.rows() * col_factor_.log_det -
                                0.5 * ds.cols() * row_factor_.log_det -
                                0.5 * d * std::log(2.0 * std::numbers::pi);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += std::exp(-0.5 * separable_sq_dist(row_factor_, col_factor_, y - ds[i]));
        return acc * std::exp(log_pref) / n;
    }
    if (const auto* bal = std::get_if<BalloonBandwidth>(&config_.bandwidth)) {
        const double r2 = kth_squared_distance(y, ds, bal->k);
        if (r2 == 0.0)
            throw DegenerateBandwidthError(
                "balloon bandwidth degenerates: query coincides with >= k observations");
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = squared_frobenius_distance(y, ds[i]) / r2;
            acc += 0.5 * profile(spec, u).kappa;
        }
        return acc / (n * std::pow(std::sqrt(r2), d));
    }
    // SamplePoint
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double h = sp_bandwidths_[static_cast<std::size_t>(i)];
        const double u = squared_frobenius_distance(y, ds[i]) / (h * h);
        acc += 0.5 * profile(spec, u).kappa / std::pow(h, d);
    }
    return acc / n;
}

double FittedEstimator::log_density_at(const Matrix& y) const {
    const Dataset& ds = *data_;
    if (y.rows() != ds.rows() || y.cols() != ds.cols())
        throw DimensionError("query shape does not match fitted data");
    const int n = ds.size();
    const int d = ds.dim();
    const KernelFamily family = config_.kernel;
    std::vector<double> terms(static_cast<std::size_t>(n));

    if (const auto* fixed = std::get_if<FixedBandwidth>(&config_.bandwidth)) {
        const double h = fixed->h;
        const double log_h_d = d * std::log(h);
        for (int i = 0; i < n; ++i) {
            const double u = squared_frobenius_distance(y, ds[i]) / (h * h);
            terms[static_cast<std::size_t>(i)] = log_kernel_at_u(family, d, u) - log_h_d;
        }
    } else if (std::holds_alternative<SeparableBandwidth>(config_.bandwidth)) {
        const double log_pref = -0.5 * ds.rows() * col_factor_.log_det -
                                0.5 * ds.cols() * row_factor_.log_det -
                                0.5 * d * std::log(2.0 * std::numbers::pi);
        for (int i = 0; i < n; ++i)
            terms[static_cast<std::size_t>(i)] =
                log_pref - 0.5 * separable_sq_dist(row_factor_, col_factor_, y - ds[i]);
    } else if (const auto* bal = std::get_if<BalloonBandwidth>(&config_.bandwidth)) {
        const double r2 = kth_squared_distance(y, ds, bal->k);
        if (r2 == 0.0)
            throw DegenerateBandwidthError(
                "balloon bandwidth degenerates: query coincides with >= k observations");
        const double log_r_d = 0.5 * d * std::log(r2);
        for (int i = 0; i < n; ++i) {
            const double u = squared_frobenius_distance(y, ds[i]) / r2;
            terms[static_cast<std::size_t>(i)] = log_kernel_at_u(family, d, u) - log_r_d;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const double h = sp_bandwidths_[static_cast<std::size_t>(i)];
            const double u = squared_frobenius_distance(y, ds[i]) / (h * h);
            terms[static_cast<std::size_t>(i)] =
                log_kernel_at_u(family, d, u) - d * std::log(h);
        }
    }
    return log_sum_exp(terms) - std::log(static_cast<double>(n));
}

double amise_bandwidth(int n, int dim, double r_k, double m2_k,
                       double r_laplacian_f) {
    if (n < 1 || dim < 1 || !(r_k > 0.0) || !(m2_k > 0.0) || !(r_laplacian_f > 0.0))
        throw ParameterError("amise_bandwidth arguments must be positive");
    const double log_num = std::log(static_cast<double>(dim)) + std::log(r_k);
    const double log_den = 2.0 * std::log(m2_k) + std::log(r_laplacian_f);
    return std::exp((log_num - log_den - std::log(static_cast<double>(n))) /
                    (dim + 4));
}

double normal_scale_gradient_bandwidth(const Dataset& data) {
    const int n = data.size();
    if (n < 2) throw ParameterError("bandwidth rule requires at least two observations");
    const int d = data.dim();

    // pooled scale: mean of the entrywise sample standard deviations
    double sigma_hat = 0.0;
    for (int i = 0; i < d; ++i) {
        double mean = 0.0;
        for (int obs = 0; obs < n; ++obs) mean += data[obs].data()[i];
        mean /= n;
        double ss = 0.0;
        for (int obs = 0; obs < n; ++obs) {
            const double dev = data[obs].data()[i] - mean;
            ss += dev * dev;
        }
        sigma_hat += std::sqrt(ss / (n - 1));
    }
    sigma_hat /= d;
    if (!(sigma_hat > 0.0))
        throw ParameterError("bandwidth rule undefined: pooled standard deviation is zero");

    return sigma_hat *
           std::pow(4.0 / (static_cast<double>(n) * (d + 4)), 1.0 / (d + 6));
}

double knn_rule_factor(KnnRule rule) {
    switch (rule) {
        case KnnRule::Half: return 0.5;
        case KnnRule::One: return 1.0;
        case KnnRule::Five: return 5.0;
    }
    throw ParameterError("unknown k rule");
}

int choose_k(KnnRule rule, int n) {
    if (n < 2) throw ParameterError("choose_k requires n >= 2");
    const long k = std::lround(knn_rule_factor(rule) * std::sqrt(static_cast<double>(n)));
    const long hi = std::max(2L, static_cast<long>(n) - 1L);
    return static_cast<int>(std::clamp(k, 2L, hi));
}

}  // namespace modalmatrix
