#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modalmatrix/dataset.hpp"

namespace modalmatrix {

// Fowlkes-Mallows index of two partitions given as per-point labels
// (arbitrary identifiers; only co-membership matters). TP = 0 maps to 0.
double fowlkes_mallows(std::span<const int> a, std::span<const int> b);

struct ConfusionTable {
    std::vector<int> row_labels; // a's distinct labels, ascending
    std::vector<int> col_labels; // b's distinct labels, ascending
    std::vector<std::vector<long long>> counts;
};

ConfusionTable confusion_table(std::span<const int> a, std::span<const int> b);

struct KMeansResult {
    std::vector<int> labels;
    std::vector<Matrix> centroids;
    double objective = 0.0; // within-cluster sum of squared Frobenius distances
    int iterations = 0;
    std::vector<double> objective_history; // per Lloyd iteration of the best run
};

// Best-of-restarts Lloyd with k-means++ seeding under Frobenius distance
// (equivalently Euclidean k-means on the flattened entries). Empty clusters
// are repaired by stealing the farthest point. Deterministic given seed.
KMeansResult kmeans(const Dataset& data, int k, std::uint64_t seed,
                    int restarts = 10);

// Mean silhouette width under Frobenius distance; singleton clusters
// contribute 0. Throws MetricError for single-cluster partitions.
double silhouette(const Dataset& data, std::span<const int> labels);

struct KSelection {
    int k = 0;
    std::vector<int> labels;
    double score = 0.0;
};

// Runs kmeans for each K in [kmin, kmax] and keeps the silhouette maximizer
// (ties to the smaller K).
KSelection select_k_silhouette(const Dataset& data, int kmin, int kmax,
                               std::uint64_t seed);

}  // namespace modalmatrix
