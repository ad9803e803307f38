#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "swarmnews/matrix.hpp"

namespace swarmnews {

inline constexpr int kNoise = -1;

struct ClusterAssignment {
    std::vector<int> labels;  // 0..K-1, or kNoise
    int cluster_count = 0;
    double eps = 0.0;
    int min_pts = 0;
};

class ClusterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::size_t> region_query(const Matrix& points, std::size_t p, double eps2) {
    std::vector<std::size_t> out;
    const auto row = points.row(p);
    for (std::size_t i = 0; i < points.rows(); ++i)
        if (squared_distance(row, points.row(i)) <= eps2) out.push_back(i);
    return out;
}

}  // namespace detail

// Classic density-based clustering with Euclidean distance. Core points are
// points with >= min_pts neighbors within eps, the point itself included.
// Seeds are visited in index order. Border points are assigned to the
// cluster of their nearest core point, which makes the labeling invariant
// (up to renaming) under permutation of the input rows.
inline ClusterAssignment dbscan(const Matrix& points, double eps, int min_pts) {
    if (!(eps > 0.0)) throw ClusterError("dbscan: eps must be positive");
    if (min_pts < 1) throw ClusterError("dbscan: min_pts must be >= 1");
    if (!points.all_finite()) throw ClusterError("dbscan: non-finite points");

    const std::size_t n = points.rows();
    const double eps2 = eps * eps;
    const auto required = static_cast<std::size_t>(min_pts);

    ClusterAssignment out;
    out.labels.assign(n, kNoise);
    out.eps = eps;
    out.min_pts = min_pts;

    std::vector<bool> core(n, false);
    std::vector<bool> visited(n, false);
    int next_cluster = 0;

    for (std::size_t seed = 0; seed < n; ++seed) {
        if (visited[seed]) continue;
        visited[seed] = true;
        auto neighbors = detail::region_query(points, seed, eps2);
        if (neighbors.size() < required) continue;  // noise or future border
        core[seed] = true;

        const int cluster = next_cluster++;
        out.labels[seed] = cluster;
        std::vector<std::size_t> queue = std::move(neighbors);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const std::size_t p = queue[qi];
            if (out.labels[p] == kNoise) out.labels[p] = cluster;
            if (visited[p]) continue;
            visited[p] = true;
            auto expansion = detail::region_query(points, p, eps2);
            if (expansion.size() >= required) {
                core[p] = true;
                queue.insert(queue.end(), expansion.begin(), expansion.end());
            }
        }
    }
    out.cluster_count = next_cluster;

    // Border points take the cluster of the nearest core point in range.
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i] || out.labels[i] == kNoise) continue;
        double best = std::numeric_limits<double>::infinity();
        int best_cluster = out.labels[i];
        for (std::size_t c = 0; c < n; ++c) {
            if (!core[c]) continue;
            const double d2 = squared_distance(points.row(i), points.row(c));
            if (d2 <= eps2 && d2 < best) {
                best = d2;
                best_cluster = out.labels[c];
            }
        }
        out.labels[i] = best_cluster;
    }
    return out;
}

// Knee of the sorted k-th-nearest-neighbor distance curve (largest second
// difference). The point itself is excluded from its neighbor ranking.
inline double suggest_eps(const Matrix& points, int k) {
    const std::size_t n = points.rows();
    if (k < 1) throw ClusterError("suggest_eps: k must be >= 1");
    if (n <= static_cast<std::size_t>(k)) throw ClusterError("suggest_eps: need more than k points");

    std::vector<double> kdist(n);
    std::vector<double> dists;
    for (std::size_t i = 0; i < n; ++i) {
        dists.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dists.push_back(squared_distance(points.row(i), points.row(j)));
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        kdist[i] = std::sqrt(dists[static_cast<std::size_t>(k - 1)]);
    }
    std::sort(kdist.begin(), kdist.end());

    double best_curv = -std::numeric_limits<double>::infinity();
    double eps = kdist.back();
    for (std::size_t i = 1; i + 1 < kdist.size(); ++i) {
        const double curv = kdist[i + 1] - 2.0 * kdist[i] + kdist[i - 1];
        if (curv > best_curv && kdist[i] > 0.0) {
            best_curv = curv;
            eps = kdist[i];
        }
    }
    if (eps > 0.0) return eps;

    // Degenerate geometry: fall back to the smallest positive pairwise distance.
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = squared_distance(points.row(i), points.row(j));
            if (d2 > 0.0) smallest = std::min(smallest, std::sqrt(d2));
        }
    if (!std::isfinite(smallest))
        throw ClusterError("suggest_eps: all points identical, no positive distance exists");
    return smallest;
}

}  // namespace swarmnews
