#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "swarmnews/matrix.hpp"

namespace swarmnews {

struct PcaModel {
    std::vector<double> mean;       // length d
    Matrix components;              // k x d, rows orthonormal
    std::vector<double> eigenvalues;  // length k, nonincreasing
    int k = 0;
};

class PcaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Cyclic Jacobi on a symmetric matrix. Off-diagonal Frobenius mass is
// driven below tol relative to the matrix norm; at most max_sweeps sweeps.
// Returns eigenvalues on the diagonal of a and eigenvectors as columns of v.
inline void jacobi_eigen(Matrix& a, Matrix& v, double tol = 1e-10, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    v = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    if (norm == 0.0) return;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
        if (std::sqrt(off) <= tol * norm) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    // Symmetrize residual rounding noise.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = m;
        }
}

// Deterministic sign: the largest-magnitude entry (first such index on
// magnitude ties) is made positive.
inline void normalize_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > best) {
            best = std::abs(v[i]);
            arg = i;
        }
    }
    if (v[arg] < 0.0)
        for (auto& x : v) x = -x;
}

}  // namespace detail

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

// Full spectrum of a symmetric matrix, sorted by eigenvalue descending;
// ties broken by the first differing entry of the sign-normalized vectors.
inline std::vector<EigenPair> symmetric_eigen(const Matrix& sym) {
    Matrix a = sym, v;
    detail::jacobi_eigen(a, v);
    const std::size_t n = sym.rows();
    std::vector<EigenPair> pairs(n);
    for (std::size_t j = 0; j < n; ++j) {
        pairs[j].value = a(j, j);
        pairs[j].vector.resize(n);
        for (std::size_t i = 0; i < n; ++i) pairs[j].vector[i] = v(i, j);
        detail::normalize_sign(pairs[j].vector);
    }
    std::sort(pairs.begin(), pairs.end(), [](const EigenPair& x, const EigenPair& y) {
        if (x.value != y.value) return x.value > y.value;
        return x.vector > y.vector;
    });
    return pairs;
}

inline PcaModel fit_pca(const Matrix& X, int k) {
    const std::size_t n = X.rows(), d = X.cols();
    if (n < 2) throw PcaError("fit_pca: need at least 2 rows");
    if (k < 1 || static_cast<std::size_t>(k) > std::min(n - 1, d))
        throw PcaError("fit_pca: k out of range [1, min(n-1, d)]");
    if (!X.all_finite()) throw PcaError("fit_pca: non-finite input");

    PcaModel model;
    model.k = k;
    model.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += X(i, j);
    for (auto& m : model.mean) m /= static_cast<double>(n);

    Matrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < d; ++p) {
            const double xp = X(i, p) - model.mean[p];
            for (std::size_t q = p; q < d; ++q)
                cov(p, q) += xp * (X(i, q) - model.mean[q]);
        }
    }
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = p; q < d; ++q) {
            cov(p, q) /= static_cast<double>(n - 1);
            cov(q, p) = cov(p, q);
        }

    const auto pairs = symmetric_eigen(cov);
    model.components = Matrix(static_cast<std::size_t>(k), d);
    model.eigenvalues.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        model.eigenvalues[static_cast<std::size_t>(c)] = pairs[static_cast<std::size_t>(c)].value;
        for (std::size_t j = 0; j < d; ++j)
            model.components(static_cast<std::size_t>(c), j) =
                pairs[static_cast<std::size_t>(c)].vector[j];
    }
    return model;
}

inline std::vector<double> project(const PcaModel& model, std::span<const double> v) {
    if (v.size() != model.mean.size()) throw PcaError("project: dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(model.k), 0.0);
    for (std::size_t c = 0; c < out.size(); ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j)
            s += model.components(c, j) * (v[j] - model.mean[j]);
        out[c] = s;
    }
    return out;
}

inline Matrix project_rows(const PcaModel& model, const Matrix& X) {
    Matrix out(X.rows(), static_cast<std::size_t>(model.k));
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto p = project(model, X.row(i));
        for (std::size_t j = 0; j < p.size(); ++j) out(i, j) = p[j];
    }
    return out;
}

}  // namespace swarmnews
