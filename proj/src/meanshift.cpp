#include "modalmatrix/meanshift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "modalmatrix/parallel.hpp"

namespace modalmatrix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_query(const FittedEstimator& est, const Matrix& y) {
    if (y.rows() != est.data().rows() || y.cols() != est.data().cols())
        throw DimensionError("query shape does not match fitted data");
}

// Softmax-weighted mean of the observations given per-observation logits.
Matrix weighted_mean(const Dataset& ds, const std::vector<double>& logits) {
    double max_logit = -kInf;
    for (double l : logits) max_logit = std::max(max_logit, l);
    if (!std::isfinite(max_logit))
        throw NumericError("mean-shift weights are not finite");

    Matrix acc(ds.rows(), ds.cols());
    double total = 0.0;
    for (int i = 0; i < ds.size(); ++i) {
        const double w = std::exp(logits[static_cast<std::size_t>(i)] - max_logit);
        total += w;
        axpy(w, ds[i], acc);
    }
    if (!std::isfinite(total) || total <= 0.0)
        throw NumericError("mean-shift weights are not finite");
    return (1.0 / total) * acc;
}

void require_gaussian(const FittedEstimator& est) {
    if (est.config().kernel != KernelFamily::GaussianMatrixNormal)
        throw ParameterError(
            "mean-shift step requires the Gaussian kernel for fixed, separable "
            "and sample-point estimators");
}

}  // namespace

Matrix ms_step(const FittedEstimator& est, const Matrix& y) {
    check_query(est, y);
    const Dataset& ds = est.data();
    const int n = ds.size();
    const int d = ds.dim();
    std::vector<double> logits(static_cast<std::size_t>(n));

    if (const auto* fixed = std::get_if<FixedBandwidth>(&est.config().bandwidth)) {
        require_gaussian(est);
        const double inv_2h2 = 0.5 / (fixed->h * fixed->h);
        for (int i = 0; i < n; ++i)
            logits[static_cast<std::size_t>(i)] =
                -squared_frobenius_distance(y, ds[i]) * inv_2h2;
        return weighted_mean(ds, logits);
    }
    if (std::holds_alternative<SeparableBandwidth>(est.config().bandwidth)) {
        require_gaussian(est);
        const CholeskyFactor& row_f = est.row_factor();
        const CholeskyFactor& col_f = est.col_factor();
        for (int i = 0; i < n; ++i) {
            const Matrix w1 = solve_lower_left(row_f.l, ds[i] - y);
            const Matrix w = solve_lower_right_transposed(w1, col_f.l);
            logits[static_cast<std::size_t>(i)] = -0.5 * squared_frobenius_norm(w);
        }
        return weighted_mean(ds, logits);
    }
    if (const auto* sp = std::get_if<SamplePointBandwidth>(&est.config().bandwidth)) {
        require_gaussian(est);
        (void)sp;
        // Exact fixed point of the sample-point gradient: each term carries
        // h_n^-(d+2), the kernel scale factor of the differentiated estimator.
        const std::vector<double>& hs = est.sample_point_bandwidths();
        for (int i = 0; i < n; ++i) {
            const double h = hs[static_cast<std::size_t>(i)];
            logits[static_cast<std::size_t>(i)] =
                -(d + 2) * std::log(h) -
                squared_frobenius_distance(y, ds[i]) / (2.0 * h * h);
        }
        return weighted_mean(ds, logits);
    }
    // Balloon: closed nearest-neighbor-mean form, uniform-ball kernel only.
    const auto& bal = std::get<BalloonBandwidth>(est.config().bandwidth);
    if (est.config().kernel != KernelFamily::UniformBall)
        throw ParameterError(
            "balloon mean-shift is only defined for the uniform-ball kernel");
    const double r = knn_distance(y, ds, bal.k);
    Matrix acc(ds.rows(), ds.cols());
    int count = 0;
    for (int i = 0; i < n; ++i) {
        if (frobenius_distance(y, ds[i]) <= r) {
            acc += ds[i];
            ++count;
        }
    }
    // ties at the radius all enter the mean, so divide by the actual count
    return (1.0 / count) * acc;
}

Matrix ms_step_knn_uniform(const Dataset& data, int k, const Matrix& y) {
    NeighborList nl = knn_query(y, data, k);
    // accumulate in dataset order so the sum is bit-identical to the
    // radius-threshold form of the same mean
    std::sort(nl.indices.begin(), nl.indices.end());
    Matrix acc(data.rows(), data.cols());
    for (int idx : nl.indices) acc += data[idx];
    return (1.0 / k) * acc;
}

AscentResult ascend(const std::function<Matrix(const Matrix&)>& step, Matrix y0,
                    const MeanShiftConfig& cfg) {
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || !(cfg.merge_radius_factor > 0.0))
        throw ParameterError("invalid mean-shift configuration");
    Matrix y = std::move(y0);
    for (int s = 1; s <= cfg.max_iter; ++s) {
        Matrix next = step(y);
        const double move = frobenius_distance(next, y);
        const double threshold = cfg.tol * (1.0 + frobenius_norm(y));
        y = std::move(next);
        if (move < threshold) return AscentResult{std::move(y), s, true};
    }
    return AscentResult{std::move(y), cfg.max_iter, false};
}

ModeMerge merge_modes(const std::vector<Matrix>& modes,
                      const std::vector<double>& scores, double radius) {
    if (modes.size() != scores.size())
        throw DimensionError("merge_modes: one score per mode required");
    if (!(radius > 0.0)) throw ParameterError("merge radius must be positive");
    const int m = static_cast<int>(modes.size());

    std::vector<int> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (frobenius_distance(modes[static_cast<std::size_t>(i)],
                                   modes[static_cast<std::size_t>(j)]) <= radius) {
                const int ri = find(i), rj = find(j);
                if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] =
                    std::min(ri, rj);
            }

    ModeMerge out;
    out.assignment.assign(static_cast<std::size_t>(m), -1);
    std::vector<int> component_of_root(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        const int root = find(i);
        if (component_of_root[static_cast<std::size_t>(root)] < 0) {
            component_of_root[static_cast<std::size_t>(root)] =
                static_cast<int>(out.representatives.size());
            out.representatives.push_back(i);
        }
        const int comp = component_of_root[static_cast<std::size_t>(root)];
        out.assignment[static_cast<std::size_t>(i)] = comp;
        const int rep = out.representatives[static_cast<std::size_t>(comp)];
        if (scores[static_cast<std::size_t>(i)] > scores[static_cast<std::size_t>(rep)])
            out.representatives[static_cast<std::size_t>(comp)] = i;
    }
    return out;
}

double merge_scale(const FittedEstimator& est) {
    const Dataset& ds = est.data();
    if (const auto* fixed = std::get_if<FixedBandwidth>(&est.config().bandwidth))
        return fixed->h;
    if (const auto* sp = std::get_if<SamplePointBandwidth>(&est.config().bandwidth))
        return sp->h;
    if (const auto* bal = std::get_if<BalloonBandwidth>(&est.config().bandwidth)) {
        double acc = 0.0;
        for (int i = 0; i < ds.size(); ++i)
            acc += knn_distance(ds[i], ds, bal->k);
        return acc / ds.size();
    }
    // Separable: effective scalar bandwidth |U|^(1/2P) |V|^(1/2T); equals the
    // h of the matching fixed estimator when U, V are scalar multiples of I.
    return std::exp(0.5 * (est.row_factor().log_det / ds.rows() +
                           est.col_factor().log_det / ds.cols()));
}

ClusterResult cluster(const Dataset& data, const EstimatorConfig& est_config,
                      const MeanShiftConfig& cfg, int threads) {
    const FittedEstimator est = fit(est_config, data);
    const int n = data.size();

    std::function<Matrix(const Matrix&)> step;
    if (const auto* bal = std::get_if<BalloonBandwidth>(&est_config.bandwidth);
        bal != nullptr && est_config.kernel == KernelFamily::UniformBall) {
        const int k = bal->k;
        step = [&data, k](const Matrix& y) { return ms_step_knn_uniform(data, k, y); };
    } else {
        step = [&est](const Matrix& y) { return ms_step(est, y); };
    }

    std::vector<AscentResult> terminal(static_cast<std::size_t>(n));
    parallel_for(n, threads, [&](int i) {
        terminal[static_cast<std::size_t>(i)] = ascend(step, data[i], cfg);
    });

    const bool balloon = std::holds_alternative<BalloonBandwidth>(est_config.bandwidth);
    std::vector<double> scores(static_cast<std::size_t>(n));
    std::vector<Matrix> terminals;
    terminals.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) terminals.push_back(terminal[static_cast<std::size_t>(i)].mode);
    parallel_for(n, threads, [&](int i) {
        if (balloon) {
            // a terminal sitting on >= k coincident observations has maximal
            // density; rank it above everything instead of failing the merge
            try {
                scores[static_cast<std::size_t>(i)] =
                    est.log_density_at(terminals[static_cast<std::size_t>(i)]);
            } catch (const DegenerateBandwidthError&) {
                scores[static_cast<std::size_t>(i)] = kInf;
            }
        } else {
            scores[static_cast<std::size_t>(i)] =
                est.log_density_at(terminals[static_cast<std::size_t>(i)]);
        }
    });

    const double radius = cfg.merge_radius_factor * merge_scale(est);
    const ModeMerge merge = merge_modes(terminals, scores, radius);

    ClusterResult result;
    result.labels = merge.assignment;
    result.iterations.reserve(static_cast<std::size_t>(n));
    result.converged.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        result.iterations.push_back(terminal[static_cast<std::size_t>(i)].iterations);
        result.converged.push_back(terminal[static_cast<std::size_t>(i)].converged);
    }
    for (int rep : merge.representatives) {
        result.modes.push_back(terminals[static_cast<std::size_t>(rep)]);
        result.mode_log_density.push_back(scores[static_cast<std::size_t>(rep)]);
    }
    return result;
}

}  // namespace modalmatrix
