#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmnews/corpus.hpp"
#include "swarmnews/matrix.hpp"
#include "swarmnews/rng.hpp"

namespace swarmnews {

struct MetricNetConfig {
    std::vector<int> layer_sizes = {64, 32};  // hidden..output widths
    double margin = 1.0;
    int epochs = 20;
    int pairs_per_epoch_factor = 4;  // pairs per epoch = factor * n
    int batch_size = 32;
    double learning_rate = 0.05;
    double lr_decay = 0.9;
    std::uint64_t seed = 1;
};

// Shared-weight embedding network: affine layers with tanh on all but the
// last, identity output.
struct MetricNet {
    std::vector<Matrix> weights;            // layer l: out_l x in_l
    std::vector<std::vector<double>> biases;
    double margin = 1.0;
    MetricNetConfig config;
    std::vector<double> epoch_loss;

    int input_dim() const { return weights.empty() ? 0 : static_cast<int>(weights.front().cols()); }
    int output_dim() const { return weights.empty() ? 0 : static_cast<int>(weights.back().rows()); }
    std::size_t layer_count() const { return weights.size(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l < weights.size(); ++l)
            n += weights[l].rows() * weights[l].cols() + biases[l].size();
        return n;
    }
};

struct Pair {
    std::size_t i = 0;
    std::size_t j = 0;
    int y = 0;  // 1 same label, 0 different
};

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double contrastive_loss(std::span<const double> e1, std::span<const double> e2, int y,
                               double margin) {
    if (e1.size() != e2.size()) throw MetricError("contrastive_loss: dimension mismatch");
    if (!(margin > 0.0)) throw MetricError("contrastive_loss: margin must be positive");
    if (!all_finite(e1) || !all_finite(e2)) throw MetricError("contrastive_loss: non-finite input");
    const double d2 = squared_distance(e1, e2);
    if (y == 1) return d2;
    const double gap = margin - std::sqrt(d2);
    return gap > 0.0 ? gap * gap : 0.0;
}

// 50/50 positive/negative in expectation; positive pairs drawn from both
// classes with equal probability. Requires two members of each class.
inline std::vector<Pair> sample_pairs(const std::vector<Label>& labels, std::size_t n_pairs,
                                      std::uint64_t seed) {
    std::vector<std::size_t> fake_idx, real_idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == Label::fake ? fake_idx : real_idx).push_back(i);
    if (fake_idx.size() < 2 || real_idx.size() < 2)
        throw MetricError("sample_pairs: each class needs at least 2 members");

    Rng rng(seed);
    auto two_distinct = [&rng](const std::vector<std::size_t>& pool) {
        const std::size_t a = rng.index(pool.size());
        std::size_t b = rng.index(pool.size() - 1);
        if (b >= a) ++b;
        return std::pair{pool[a], pool[b]};
    };

    std::vector<Pair> pairs;
    pairs.reserve(n_pairs);
    for (std::size_t p = 0; p < n_pairs; ++p) {
        if (rng.uniform() < 0.5) {
            const auto& pool = rng.uniform() < 0.5 ? fake_idx : real_idx;
            const auto [a, b] = two_distinct(pool);
            pairs.push_back({a, b, 1});
        } else {
            pairs.push_back({fake_idx[rng.index(fake_idx.size())],
                             real_idx[rng.index(real_idx.size())], 0});
        }
    }
    return pairs;
}

namespace detail {

struct ForwardTrace {
    std::vector<std::vector<double>> pre;   // per layer, before activation
    std::vector<std::vector<double>> post;  // per layer, after activation
};

inline std::vector<double> net_forward(const MetricNet& net, std::span<const double> x,
                                       ForwardTrace* trace = nullptr) {
    std::vector<double> cur(x.begin(), x.end());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Matrix& w = net.weights[l];
        std::vector<double> z(w.rows());
        for (std::size_t r = 0; r < w.rows(); ++r)
            z[r] = dot(w.row(r), cur) + net.biases[l][r];
        const bool last = l + 1 == net.weights.size();
        std::vector<double> a = z;
        if (!last)
            for (auto& v : a) v = std::tanh(v);
        if (trace) {
            trace->pre.push_back(z);
            trace->post.push_back(a);
        }
        cur = std::move(a);
    }
    return cur;
}

// Backprop dL/d(output) through one branch, accumulating parameter grads.
inline void net_backward(const MetricNet& net, std::span<const double> x,
                         const ForwardTrace& trace, std::vector<double> delta,
                         std::vector<Matrix>& grad_w, std::vector<std::vector<double>>& grad_b) {
    for (std::size_t li = net.weights.size(); li-- > 0;) {
        const bool last = li + 1 == net.weights.size();
        if (!last) {
            for (std::size_t r = 0; r < delta.size(); ++r) {
                const double t = trace.post[li][r];
                delta[r] *= 1.0 - t * t;  // tanh'
            }
        }
        const std::span<const double> input =
            li == 0 ? x : std::span<const double>(trace.post[li - 1]);
        Matrix& gw = grad_w[li];
        for (std::size_t r = 0; r < delta.size(); ++r) {
            for (std::size_t c = 0; c < input.size(); ++c) gw(r, c) += delta[r] * input[c];
            grad_b[li][r] += delta[r];
        }
        if (li == 0) break;
        const Matrix& w = net.weights[li];
        std::vector<double> prev(w.cols(), 0.0);
        for (std::size_t r = 0; r < w.rows(); ++r)
            for (std::size_t c = 0; c < w.cols(); ++c) prev[c] += w(r, c) * delta[r];
        delta = std::move(prev);
    }
}

inline void zero_like(const MetricNet& net, std::vector<Matrix>& gw,
                      std::vector<std::vector<double>>& gb) {
    gw.clear();
    gb.clear();
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        gw.emplace_back(net.weights[l].rows(), net.weights[l].cols());
        gb.emplace_back(net.biases[l].size(), 0.0);
    }
}

}  // namespace detail

inline std::vector<double> metric_embed(const MetricNet& net, std::span<const double> v) {
    if (static_cast<int>(v.size()) != net.input_dim())
        throw MetricError("metric_embed: dimension mismatch");
    return detail::net_forward(net, v);
}

inline Matrix metric_embed_rows(const MetricNet& net, const Matrix& X) {
    Matrix out(X.rows(), static_cast<std::size_t>(net.output_dim()));
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto e = metric_embed(net, X.row(i));
        for (std::size_t j = 0; j < e.size(); ++j) out(i, j) = e[j];
    }
    return out;
}

inline double pair_loss(const MetricNet& net, std::span<const double> x1,
                        std::span<const double> x2, int y) {
    const auto e1 = detail::net_forward(net, x1);
    const auto e2 = detail::net_forward(net, x2);
    return contrastive_loss(e1, e2, y, net.margin);
}

// Gradient of the contrastive pair loss with respect to every parameter,
// both branches passing through the shared weights. Returns the loss.
inline double pair_loss_gradients(const MetricNet& net, std::span<const double> x1,
                                  std::span<const double> x2, int y,
                                  std::vector<Matrix>& grad_w,
                                  std::vector<std::vector<double>>& grad_b) {
    detail::ForwardTrace t1, t2;
    const auto e1 = detail::net_forward(net, x1, &t1);
    const auto e2 = detail::net_forward(net, x2, &t2);
    const double dist = euclidean_distance(e1, e2);
    const double loss = contrastive_loss(e1, e2, y, net.margin);

    // dL/d(e1 - e2): y=1 -> 2*(e1-e2); y=0 inside margin -> -2*(margin-D)/D*(e1-e2).
    std::vector<double> d1(e1.size(), 0.0);
    if (y == 1) {
        for (std::size_t i = 0; i < e1.size(); ++i) d1[i] = 2.0 * (e1[i] - e2[i]);
    } else if (dist < net.margin && dist > 0.0) {
        const double scale = -2.0 * (net.margin - dist) / dist;
        for (std::size_t i = 0; i < e1.size(); ++i) d1[i] = scale * (e1[i] - e2[i]);
    }  // D >= margin, or the D=0 cusp: zero (sub)gradient

    std::vector<double> d2(d1.size());
    for (std::size_t i = 0; i < d1.size(); ++i) d2[i] = -d1[i];
    detail::net_backward(net, x1, t1, std::move(d1), grad_w, grad_b);
    detail::net_backward(net, x2, t2, std::move(d2), grad_w, grad_b);
    return loss;
}

inline MetricNet make_metric_net(int input_dim, const MetricNetConfig& config) {
    if (config.layer_sizes.empty()) throw MetricError("metric net needs at least one layer");
    MetricNet net;
    net.margin = config.margin;
    net.config = config;
    Rng rng(config.seed);
    int in = input_dim;
    for (int out : config.layer_sizes) {
        if (out < 1) throw MetricError("metric net layer size must be positive");
        Matrix w(static_cast<std::size_t>(out), static_cast<std::size_t>(in));
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        for (auto& x : w.data()) x = rng.uniform(-limit, limit);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(static_cast<std::size_t>(out), 0.0);
        in = out;
    }
    return net;
}

// Mini-batch SGD over sampled pairs with per-epoch learning-rate decay.
inline MetricNet train_metric_net(const Matrix& X, const std::vector<Label>& labels,
                                  const MetricNetConfig& config) {
    if (X.rows() != labels.size()) throw MetricError("train_metric_net: label count mismatch");
    if (X.rows() < 4) throw MetricError("train_metric_net: need at least 4 rows");
    if (!X.all_finite()) throw MetricError("train_metric_net: non-finite features");

    MetricNet net = make_metric_net(static_cast<int>(X.cols()), config);
    const std::size_t pairs_per_epoch =
        std::max<std::size_t>(1, static_cast<std::size_t>(config.pairs_per_epoch_factor) * X.rows());

    std::vector<Matrix> gw;
    std::vector<std::vector<double>> gb;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto pairs =
            sample_pairs(labels, pairs_per_epoch,
                         stage_seed(config.seed, "pairs/" + std::to_string(epoch)));
        const double lr = config.learning_rate * std::pow(config.lr_decay, epoch);

        double epoch_sum = 0.0;
        std::size_t done = 0;
        while (done < pairs.size()) {
            const std::size_t batch = std::min<std::size_t>(
                static_cast<std::size_t>(config.batch_size), pairs.size() - done);
            detail::zero_like(net, gw, gb);
            for (std::size_t b = 0; b < batch; ++b) {
                const Pair& p = pairs[done + b];
                epoch_sum += pair_loss_gradients(net, X.row(p.i), X.row(p.j), p.y, gw, gb);
            }
            const double step = lr / static_cast<double>(batch);
            for (std::size_t l = 0; l < net.weights.size(); ++l) {
                auto& w = net.weights[l].data();
                const auto& g = gw[l].data();
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * g[i];
                for (std::size_t i = 0; i < net.biases[l].size(); ++i)
                    net.biases[l][i] -= step * gb[l][i];
            }
            done += batch;
        }
        const double mean = epoch_sum / static_cast<double>(pairs.size());
        if (!std::isfinite(mean))
            throw MetricError("train_metric_net: diverged at epoch " + std::to_string(epoch) +
                              " (non-finite loss)");
        net.epoch_loss.push_back(mean);
    }
    for (const auto& w : net.weights)
        if (!w.all_finite()) throw MetricError("train_metric_net: non-finite parameters");
    return net;
}

}  // namespace swarmnews
