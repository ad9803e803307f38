#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "swarmnews/rng.hpp"
#include "swarmnews/tokenize.hpp"

namespace swarmnews {

struct Vocabulary {
    std::vector<std::string> words;        // dense index -> word
    std::vector<std::int64_t> frequency;   // dense index -> corpus frequency
    std::unordered_map<std::string, std::int32_t> index;
    int min_count = 5;
    std::int64_t total_tokens = 0;  // occurrences of retained words

    std::size_t size() const { return words.size(); }

    std::int32_t lookup(const std::string& w) const {
        const auto it = index.find(w);
        return it == index.end() ? -1 : it->second;
    }
};

struct Word2VecConfig {
    int dim = 100;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    int min_count = 5;
    float learning_rate = 0.025f;
    std::uint64_t seed = 1;
};

struct WordEmbeddingModel {
    Vocabulary vocab;
    Word2VecConfig config;
    std::vector<float> vectors;       // V x dim, row-major input vectors
    std::vector<double> epoch_loss;   // mean negative-sampling loss per epoch

    std::span<const float> row(std::size_t i) const {
        return {vectors.data() + i * static_cast<std::size_t>(config.dim),
                static_cast<std::size_t>(config.dim)};
    }
};

struct DocEmbedding {
    std::int64_t article_id = 0;
    std::vector<double> vector;
    std::int64_t token_count = 0;  // in-vocabulary tokens averaged

    bool empty_text() const { return token_count == 0; }
};

class EmbeddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Indices are dense 0..V-1 ordered by frequency descending, word ascending
// on ties, so rebuilding from the same corpus is reproducible.
inline Vocabulary build_vocabulary(const std::vector<Sentence>& sentences, int min_count) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& s : sentences)
        for (const auto& w : s) ++counts[w];

    std::vector<std::pair<std::string, std::int64_t>> kept;
    for (auto& [w, c] : counts)
        if (c >= min_count) kept.emplace_back(w, c);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary v;
    v.min_count = min_count;
    v.words.reserve(kept.size());
    v.frequency.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        v.words.push_back(kept[i].first);
        v.frequency.push_back(kept[i].second);
        v.index.emplace(kept[i].first, static_cast<std::int32_t>(i));
        v.total_tokens += kept[i].second;
    }
    return v;
}

namespace detail {

// Walker alias table for the unigram^0.75 negative-sampling distribution.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights) {
        const std::size_t n = weights.size();
        prob_.resize(n);
        alias_.resize(n);
        double total = 0.0;
        for (double w : weights) total += w;

        std::vector<double> scaled(n);
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = scaled[l] + scaled[s] - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (std::size_t s : small) prob_[s] = 1.0;
        for (std::size_t l : large) prob_[l] = 1.0;
    }

    std::size_t sample(Rng& rng) const {
        const std::size_t i = rng.index(prob_.size());
        return rng.uniform() < prob_[i] ? i : alias_[i];
    }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

// Loss of one negative-sampling event: -log s(u.v+) - sum -log s(-u.v-),
// with u the input (context) vector, v+ the target output vector and v-
// the sampled negatives' output vectors.
inline double sgns_event_loss(std::span<const double> u, std::span<const double> v_pos,
                              const std::vector<std::vector<double>>& v_negs) {
    double dotp = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dotp += u[i] * v_pos[i];
    double loss = -std::log(std::max(detail::sigmoid(dotp), 1e-300));
    for (const auto& vn : v_negs) {
        double dn = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) dn += u[i] * vn[i];
        loss += -std::log(std::max(detail::sigmoid(-dn), 1e-300));
    }
    return loss;
}

// Analytic gradients of sgns_event_loss. The training loop applies exactly
// -lr times these, so the finite-difference check in the test suite covers
// the production update path.
inline void sgns_event_gradients(std::span<const double> u, std::span<const double> v_pos,
                                 const std::vector<std::vector<double>>& v_negs,
                                 std::vector<double>& grad_u, std::vector<double>& grad_v_pos,
                                 std::vector<std::vector<double>>& grad_v_negs) {
    const std::size_t d = u.size();
    grad_u.assign(d, 0.0);
    grad_v_pos.assign(d, 0.0);
    grad_v_negs.assign(v_negs.size(), std::vector<double>(d, 0.0));

    double dotp = 0.0;
    for (std::size_t i = 0; i < d; ++i) dotp += u[i] * v_pos[i];
    const double gp = detail::sigmoid(dotp) - 1.0;  // d loss / d (u.v+)
    for (std::size_t i = 0; i < d; ++i) {
        grad_u[i] += gp * v_pos[i];
        grad_v_pos[i] = gp * u[i];
    }
    for (std::size_t k = 0; k < v_negs.size(); ++k) {
        double dn = 0.0;
        for (std::size_t i = 0; i < d; ++i) dn += u[i] * v_negs[k][i];
        const double gn = detail::sigmoid(dn);  // d loss / d (u.v-)
        for (std::size_t i = 0; i < d; ++i) {
            grad_u[i] += gn * v_negs[k][i];
            grad_v_negs[k][i] = gn * u[i];
        }
    }
}

// Skip-gram with negative sampling. Single-threaded by construction: the
// strict determinism contract is that one (sentences, config) pair always
// produces bit-identical vectors.
inline WordEmbeddingModel train_word2vec(const std::vector<Sentence>& sentences,
                                         const Word2VecConfig& config) {
    WordEmbeddingModel model;
    model.config = config;
    model.vocab = build_vocabulary(sentences, config.min_count);
    const std::size_t vocab_size = model.vocab.size();
    if (vocab_size < 2)
        throw EmbeddingError("word2vec: vocabulary has fewer than 2 words after min_count filtering");

    const auto dim = static_cast<std::size_t>(config.dim);
    Rng rng(config.seed);
    model.vectors.resize(vocab_size * dim);
    for (auto& x : model.vectors)
        x = static_cast<float>(rng.uniform(-0.5, 0.5) / config.dim);
    std::vector<float> output(vocab_size * dim, 0.0f);

    // Sentences mapped to dense ids; out-of-vocabulary tokens vanish.
    std::vector<std::vector<std::int32_t>> encoded;
    encoded.reserve(sentences.size());
    std::int64_t total_positions = 0;
    for (const auto& s : sentences) {
        std::vector<std::int32_t> ids;
        ids.reserve(s.size());
        for (const auto& w : s) {
            const std::int32_t id = model.vocab.lookup(w);
            if (id >= 0) ids.push_back(id);
        }
        if (!ids.empty()) {
            total_positions += static_cast<std::int64_t>(ids.size());
            encoded.push_back(std::move(ids));
        }
    }
    if (total_positions == 0) throw EmbeddingError("word2vec: no trainable tokens");

    std::vector<double> noise(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i)
        noise[i] = std::pow(static_cast<double>(model.vocab.frequency[i]), 0.75);
    const detail::AliasTable negatives(noise);

    const double planned = static_cast<double>(total_positions) * config.epochs;
    const float lr0 = config.learning_rate;
    std::int64_t processed = 0;
    std::vector<float> accum(dim);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::int64_t loss_events = 0;
        for (const auto& sen : encoded) {
            const float lr = std::max(
                lr0 * static_cast<float>(1.0 - static_cast<double>(processed) / planned),
                lr0 * 1e-4f);
            processed += static_cast<std::int64_t>(sen.size());

            for (std::size_t t = 0; t < sen.size(); ++t) {
                const std::int32_t center = sen[t];
                const auto reach = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(config.window)));
                const std::size_t lo = t >= static_cast<std::size_t>(reach) ? t - reach : 0;
                const std::size_t hi = std::min(sen.size() - 1, t + static_cast<std::size_t>(reach));
                for (std::size_t c = lo; c <= hi; ++c) {
                    if (c == t) continue;
                    float* const in = model.vectors.data() + static_cast<std::size_t>(sen[c]) * dim;
                    std::fill(accum.begin(), accum.end(), 0.0f);

                    for (int neg = 0; neg <= config.negatives; ++neg) {
                        std::int32_t target;
                        float label;
                        if (neg == 0) {
                            target = center;
                            label = 1.0f;
                        } else {
                            target = static_cast<std::int32_t>(negatives.sample(rng));
                            if (target == center) continue;
                            label = 0.0f;
                        }
                        float* const out = output.data() + static_cast<std::size_t>(target) * dim;
                        float f = 0.0f;
                        for (std::size_t i = 0; i < dim; ++i) f += in[i] * out[i];
                        const auto s = static_cast<float>(detail::sigmoid(f));
                        const float g = (label - s) * lr;
                        loss_sum += label > 0.5f ? -std::log(std::max<double>(s, 1e-12))
                                                 : -std::log(std::max<double>(1.0f - s, 1e-12));
                        ++loss_events;
                        for (std::size_t i = 0; i < dim; ++i) accum[i] += g * out[i];
                        for (std::size_t i = 0; i < dim; ++i) out[i] += g * in[i];
                    }
                    for (std::size_t i = 0; i < dim; ++i) in[i] += accum[i];
                }
            }
        }
        model.epoch_loss.push_back(loss_events > 0 ? loss_sum / static_cast<double>(loss_events)
                                                   : 0.0);
    }

    for (float x : model.vectors)
        if (!std::isfinite(x)) throw EmbeddingError("word2vec: non-finite vector after training");
    return model;
}

// Average pooling over in-vocabulary tokens of all sentences. Articles
// with no known tokens get a zero vector and keep token_count = 0.
inline DocEmbedding doc_embedding(std::int64_t article_id, const std::vector<Sentence>& sentences,
                                  const WordEmbeddingModel& model) {
    DocEmbedding doc;
    doc.article_id = article_id;
    doc.vector.assign(static_cast<std::size_t>(model.config.dim), 0.0);
    for (const auto& s : sentences) {
        for (const auto& w : s) {
            const std::int32_t id = model.vocab.lookup(w);
            if (id < 0) continue;
            const auto row = model.row(static_cast<std::size_t>(id));
            for (std::size_t i = 0; i < row.size(); ++i) doc.vector[i] += row[i];
            ++doc.token_count;
        }
    }
    if (doc.token_count > 0)
        for (auto& x : doc.vector) x /= static_cast<double>(doc.token_count);
    return doc;
}

}  // namespace swarmnews
