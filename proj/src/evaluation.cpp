#include "modalmatrix/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "modalmatrix/rng.hpp"

namespace modalmatrix {

namespace {

std::vector<int> dense_relabel(std::span<const int> labels, int* n_groups) {
    std::unordered_map<int, int> ids;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.emplace(labels[i], static_cast<int>(ids.size()));
        out[i] = it->second;
    }
    *n_groups = static_cast<int>(ids.size());
    return out;
}

unsigned long long pairs_of(unsigned long long n) { return n * (n - 1) / 2; }

}  // namespace

double fowlkes_mallows(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw DimensionError("partitions must have equal length");
    if (a.size() < 2) throw ParameterError("partitions need at least two points");

    int ra = 0, rb = 0;
    const std::vector<int> da = dense_relabel(a, &ra);
    const std::vector<int> db = dense_relabel(b, &rb);

    std::vector<unsigned long long> cont(static_cast<std::size_t>(ra) * rb, 0);
    std::vector<unsigned long long> row(static_cast<std::size_t>(ra), 0);
    std::vector<unsigned long long> col(static_cast<std::size_t>(rb), 0);
    for (std::size_t i = 0; i < da.size(); ++i) {
        ++cont[static_cast<std::size_t>(da[i]) * rb + db[i]];
        ++row[static_cast<std::size_t>(da[i])];
        ++col[static_cast<std::size_t>(db[i])];
    }

    unsigned long long tp = 0, pa = 0, pb = 0;
    for (unsigned long long c : cont) tp += pairs_of(c);
    for (unsigned long long c : row) pa += pairs_of(c); // co-clustered in a
    for (unsigned long long c : col) pb += pairs_of(c); // co-clustered in b
    if (tp == 0) return 0.0;
    return static_cast<double>(tp) /
           std::sqrt(static_cast<double>(pa) * static_cast<double>(pb));
}

ConfusionTable confusion_table(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw DimensionError("partitions must have equal length");

    std::map<int, int> ra, rb; // sorted label -> row/col position
    for (int v : a) ra.emplace(v, 0);
    for (int v : b) rb.emplace(v, 0);
    ConfusionTable out;
    for (auto& [label, pos] : ra) {
        pos = static_cast<int>(out.row_labels.size());
        out.row_labels.push_back(label);
    }
    for (auto& [label, pos] : rb) {
        pos = static_cast<int>(out.col_labels.size());
        out.col_labels.push_back(label);
    }
    out.counts.assign(out.row_labels.size(),
                      std::vector<long long>(out.col_labels.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        ++out.counts[static_cast<std::size_t>(ra[a[i]])]
                    [static_cast<std::size_t>(rb[b[i]])];
    return out;
}

namespace {

struct LloydRun {
    std::vector<int> labels;
    std::vector<Matrix> centroids;
    double objective = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::vector<double> history;
};

LloydRun lloyd_once(const Dataset& data, int k, SplitMix64 rng) {
    const int n = data.size();

    // k-means++ seeding
    std::vector<Matrix> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(data[rng.next_index(n)]);
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const Matrix& cm : centroids)
                best = std::min(best, squared_frobenius_distance(data[i], cm));
            d2[static_cast<std::size_t>(i)] = best;
            total += best;
        }
        int pick = 0;
        if (total > 0.0) {
            const double target = rng.next_uniform() * total;
            double cum = 0.0;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                cum += d2[static_cast<std::size_t>(i)];
                if (target < cum) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.next_index(n);
        }
        centroids.push_back(data[pick]);
    }

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    std::vector<double> history;
    int iterations = 0;
    for (int iter = 0; iter < 100; ++iter) {
        ++iterations;
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = squared_frobenius_distance(data[i], centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = squared_frobenius_distance(
                    data[i], centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[static_cast<std::size_t>(i)] != best) {
                labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }

        // repair empty clusters with the farthest point from its centroid
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (int lab : labels) ++sizes[static_cast<std::size_t>(lab)];
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) continue;
            int worst = -1;
            double worst_d = -1.0;
            for (int i = 0; i < n; ++i) {
                const int owner = labels[static_cast<std::size_t>(i)];
                if (sizes[static_cast<std::size_t>(owner)] <= 1) continue;
                const double d = squared_frobenius_distance(
                    data[i], centroids[static_cast<std::size_t>(owner)]);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            if (worst < 0) break;
            --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(worst)])];
            labels[static_cast<std::size_t>(worst)] = c;
            sizes[static_cast<std::size_t>(c)] = 1;
            changed = true;
        }

        // centroid update: entrywise means
        for (int c = 0; c < k; ++c)
            centroids[static_cast<std::size_t>(c)] = Matrix(data.rows(), data.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            centroids[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] +=
                data[i];
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c)
            centroids[static_cast<std::size_t>(c)] =
                (1.0 / counts[static_cast<std::size_t>(c)]) *
                centroids[static_cast<std::size_t>(c)];

        double objective = 0.0;
        for (int i = 0; i < n; ++i)
            objective += squared_frobenius_distance(
                data[i],
                centroids[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]);
        history.push_back(objective);

        if (!changed) break;
    }

    return LloydRun{std::move(labels), std::move(centroids), history.back(),
                    iterations, std::move(history)};
}

}  // namespace

KMeansResult kmeans(const Dataset& data, int k, std::uint64_t seed, int restarts) {
    if (k < 2 || k > data.size())
        throw ParameterError("kmeans: K must lie in [2, N]");
    if (restarts < 1) throw ParameterError("kmeans: restarts must be positive");

    LloydRun best;
    for (int r = 0; r < restarts; ++r) {
        LloydRun run = lloyd_once(data, k, SplitMix64::substream(seed, static_cast<std::uint64_t>(r)));
        if (run.objective < best.objective) best = std::move(run);
    }
    return KMeansResult{std::move(best.labels), std::move(best.centroids),
                        best.objective, best.iterations, std::move(best.history)};
}

double silhouette(const Dataset& data, std::span<const int> labels) {
    const int n = data.size();
    if (static_cast<std::size_t>(n) != labels.size())
        throw DimensionError("one label per observation required");
    if (n < 3) throw ParameterError("silhouette requires at least three points");

    int groups = 0;
    const std::vector<int> dense = dense_relabel(labels, &groups);
    if (groups < 2) throw MetricError("silhouette undefined for a single cluster");

    std::vector<int> sizes(static_cast<std::size_t>(groups), 0);
    for (int lab : dense) ++sizes[static_cast<std::size_t>(lab)];

    double total = 0.0;
    std::vector<double> mean_to(static_cast<std::size_t>(groups));
    for (int i = 0; i < n; ++i) {
        std::fill(mean_to.begin(), mean_to.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_to[static_cast<std::size_t>(dense[static_cast<std::size_t>(j)])] +=
                frobenius_distance(data[i], data[j]);
        }
        const int own = dense[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(own)] <= 1) continue; // singleton: s = 0
        const double a =
            mean_to[static_cast<std::size_t>(own)] / (sizes[static_cast<std::size_t>(own)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int g = 0; g < groups; ++g) {
            if (g == own) continue;
            b = std::min(b, mean_to[static_cast<std::size_t>(g)] /
                                sizes[static_cast<std::size_t>(g)]);
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / n;
}

KSelection select_k_silhouette(const Dataset& data, int kmin, int kmax,
                               std::uint64_t seed) {
    if (kmin < 2 || kmin > kmax || kmax > data.size() - 1)
        throw ParameterError("select_k: need 2 <= kmin <= kmax <= N-1");

    KSelection best;
    best.score = -std::numeric_limits<double>::infinity();
    for (int k = kmin; k <= kmax; ++k) {
        KMeansResult run = kmeans(data, k, derive_seed(seed, static_cast<std::uint64_t>(k)));
        const double score = silhouette(data, run.labels);
        if (score > best.score) {
            best.k = k;
            best.labels = std::move(run.labels);
            best.score = score;
        }
    }
    return best;
}

}  // namespace modalmatrix
