#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "swarmnews/matrix.hpp"

namespace swarmnews {

// Per-column z-score with training statistics. Constant columns pass
// through untouched (mean 0, scale 1).
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    std::size_t width() const { return mean.size(); }
};

inline Standardizer fit_standardizer(const Matrix& X) {
    const std::size_t n = X.rows(), d = X.cols();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    if (n < 2) return s;

    std::vector<double> mu(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mu[j] += X(i, j);
    for (auto& m : mu) m /= static_cast<double>(n);

    std::vector<double> var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = X(i, j) - mu[j];
            var[j] += c * c;
        }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(n - 1));
        if (sd > 1e-12) {
            s.mean[j] = mu[j];
            s.scale[j] = sd;
        }
    }
    return s;
}

inline void standardize_in_place(const Standardizer& s, Matrix& X) {
    if (X.cols() != s.width()) throw std::invalid_argument("standardize: width mismatch");
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) X(i, j) = (X(i, j) - s.mean[j]) / s.scale[j];
}

inline Matrix standardize(const Standardizer& s, const Matrix& X) {
    Matrix out = X;
    standardize_in_place(s, out);
    return out;
}

}  // namespace swarmnews
