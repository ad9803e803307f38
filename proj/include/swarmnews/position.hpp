#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "swarmnews/dbscan.hpp"
#include "swarmnews/matrix.hpp"

namespace swarmnews {

// Frozen cluster geometry fitted on training embeddings. Centers are the
// member centroids (noise excluded), ordered by cluster size descending
// with lexicographic centroid tie-break, so refitting permuted input
// reproduces the same matrix.
struct PositionModel {
    Matrix centers;  // K x d
    double eps = 0.0;
    int min_pts = 0;
    int cluster_count = 0;
};

struct PositionEmbedding {
    std::vector<double> distances;  // to each center, in center order
    int swarm_id = 0;               // argmin distance, lowest index on ties
};

inline PositionModel fit_position_model(const Matrix& X_train, double eps, int min_pts) {
    const ClusterAssignment assignment = dbscan(X_train, eps, min_pts);
    if (assignment.cluster_count == 0)
        throw ClusterError(
            "fit_position_model: every point is noise; increase eps or lower min_pts");

    const std::size_t k = static_cast<std::size_t>(assignment.cluster_count);
    const std::size_t d = X_train.cols();
    std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < X_train.rows(); ++i) {
        const int c = assignment.labels[i];
        if (c == kNoise) continue;
        const auto row = X_train.row(i);
        for (std::size_t j = 0; j < d; ++j) sums[static_cast<std::size_t>(c)][j] += row[j];
        ++sizes[static_cast<std::size_t>(c)];
    }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j) sums[c][j] /= static_cast<double>(sizes[c]);

    std::vector<std::size_t> order(k);
    for (std::size_t c = 0; c < k; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
        return sums[a] < sums[b];
    });

    PositionModel model;
    model.eps = eps;
    model.min_pts = min_pts;
    model.cluster_count = assignment.cluster_count;
    model.centers = Matrix(k, d);
    for (std::size_t rank = 0; rank < k; ++rank)
        for (std::size_t j = 0; j < d; ++j) model.centers(rank, j) = sums[order[rank]][j];
    return model;
}

inline PositionEmbedding position_encode(const PositionModel& model, std::span<const double> v) {
    if (v.size() != model.centers.cols()) throw ClusterError("position_encode: dimension mismatch");
    PositionEmbedding out;
    out.distances.resize(model.centers.rows());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.centers.rows(); ++c) {
        out.distances[c] = euclidean_distance(v, model.centers.row(c));
        if (out.distances[c] < best) {
            best = out.distances[c];
            out.swarm_id = static_cast<int>(c);
        }
    }
    return out;
}

// Feature rows: K distances then the numeric swarm id.
inline Matrix position_encode_rows(const PositionModel& model, const Matrix& X) {
    Matrix out(X.rows(), model.centers.rows() + 1);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto e = position_encode(model, X.row(i));
        for (std::size_t c = 0; c < e.distances.size(); ++c) out(i, c) = e.distances[c];
        out(i, e.distances.size()) = static_cast<double>(e.swarm_id);
    }
    return out;
}

}  // namespace swarmnews
