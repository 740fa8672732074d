#include "specorr/ann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace specorr {

namespace {

void standardize(const BandClassifier& m, const std::array<double, fingerprint_size>& x,
                 std::vector<double>& z) {
    z.resize(m.input_size);
    for (std::size_t i = 0; i < m.input_size; ++i) {
        const double v = (x[i] - m.feature_mean[i]) / m.feature_scale[i];
        z[i] = std::clamp(v, -m.z_clip, m.z_clip);
    }
}

void forward_layers(const BandClassifier& m, const std::vector<double>& z,
                    std::vector<double>& hidden, std::array<double, num_classes>& p) {
    hidden.resize(m.hidden_size);
    for (std::size_t h = 0; h < m.hidden_size; ++h) {
        double acc = m.b1[h];
        const double* row = &m.w1[h * m.input_size];
        for (std::size_t i = 0; i < m.input_size; ++i) acc += row[i] * z[i];
        hidden[h] = std::tanh(acc);
    }
    std::array<double, num_classes> logits{};
    for (std::size_t c = 0; c < num_classes; ++c) {
        double acc = m.b2[c];
        const double* row = &m.w2[c * m.hidden_size];
        for (std::size_t h = 0; h < m.hidden_size; ++h) acc += row[h] * hidden[h];
        logits[c] = acc;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        p[c] = std::exp(logits[c] - top);
        sum += p[c];
    }
    for (auto& v : p) v /= sum;
}

double dataset_loss(const BandClassifier& m, const LabeledDataset& data,
                    const std::vector<std::size_t>& rows) {
    std::vector<double> z, hidden;
    std::array<double, num_classes> p{};
    double loss = 0.0;
    for (std::size_t r : rows) {
        standardize(m, data.features[r], z);
        forward_layers(m, z, hidden, p);
        loss += cross_entropy(p, data.labels[r]);
    }
    return loss / static_cast<double>(rows.size());
}

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(i) - 1));
        std::swap(idx[i - 1], idx[j]);
    }
}

}  // namespace

void validate(const TrainConfig& cfg) {
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
    if (cfg.epochs == 0) throw std::invalid_argument("train: epochs must be >= 1");
    if (cfg.batch_size == 0) throw std::invalid_argument("train: batch size must be >= 1");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0)
        throw std::invalid_argument("train: momentum must lie in [0, 1)");
    if (cfg.validation_fraction <= 0.0 || cfg.validation_fraction >= 0.5)
        throw std::invalid_argument("train: validation fraction must lie in (0, 0.5)");
}

BandClassifier init_classifier(int band_index, std::size_t hidden_size, Rng& rng) {
    if (hidden_size < 5 || hidden_size > 40)
        throw std::invalid_argument("init_classifier: hidden size must lie in [5, 40]");
    BandClassifier m;
    m.band_index = band_index;
    m.hidden_size = hidden_size;
    m.w1.resize(hidden_size * m.input_size);
    m.b1.assign(hidden_size, 0.0);
    m.w2.resize(num_classes * hidden_size);
    m.b2.assign(num_classes, 0.0);
    m.feature_mean.assign(m.input_size, 0.0);
    m.feature_scale.assign(m.input_size, 1.0);
    const double lim1 = std::sqrt(6.0 / static_cast<double>(m.input_size + hidden_size));
    for (auto& w : m.w1) w = rng.uniform(-lim1, lim1);
    const double lim2 = std::sqrt(6.0 / static_cast<double>(hidden_size + num_classes));
    for (auto& w : m.w2) w = rng.uniform(-lim2, lim2);
    return m;
}

std::array<double, num_classes> forward(const BandClassifier& m,
                                        const std::array<double, fingerprint_size>& x) {
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite fingerprint");
    std::vector<double> z, hidden;
    std::array<double, num_classes> p{};
    standardize(m, x, z);
    forward_layers(m, z, hidden, p);
    return p;
}

double cross_entropy(const std::array<double, num_classes>& p, int label) {
    if (label < 1 || label > static_cast<int>(num_classes))
        throw std::invalid_argument("cross_entropy: label out of range");
    return -std::log(std::max(p[static_cast<std::size_t>(label - 1)], 1e-300));
}

double batch_loss_and_gradient(const BandClassifier& m, const LabeledDataset& data,
                               const std::vector<std::size_t>& batch, Gradients& out) {
    if (batch.empty()) throw std::invalid_argument("batch_loss_and_gradient: empty batch");
    out.w1.assign(m.w1.size(), 0.0);
    out.b1.assign(m.b1.size(), 0.0);
    out.w2.assign(m.w2.size(), 0.0);
    out.b2.assign(m.b2.size(), 0.0);

    std::vector<double> z, hidden, delta1(m.hidden_size);
    std::array<double, num_classes> p{};
    double loss = 0.0;
    for (std::size_t r : batch) {
        standardize(m, data.features[r], z);
        forward_layers(m, z, hidden, p);
        loss += cross_entropy(p, data.labels[r]);

        std::array<double, num_classes> delta2 = p;
        delta2[static_cast<std::size_t>(data.labels[r] - 1)] -= 1.0;
        for (std::size_t c = 0; c < num_classes; ++c) {
            out.b2[c] += delta2[c];
            double* row = &out.w2[c * m.hidden_size];
            for (std::size_t h = 0; h < m.hidden_size; ++h) row[h] += delta2[c] * hidden[h];
        }
        for (std::size_t h = 0; h < m.hidden_size; ++h) {
            double acc = 0.0;
            for (std::size_t c = 0; c < num_classes; ++c)
                acc += m.w2[c * m.hidden_size + h] * delta2[c];
            delta1[h] = acc * (1.0 - hidden[h] * hidden[h]);
        }
        for (std::size_t h = 0; h < m.hidden_size; ++h) {
            out.b1[h] += delta1[h];
            double* row = &out.w1[h * m.input_size];
            for (std::size_t i = 0; i < m.input_size; ++i) row[i] += delta1[h] * z[i];
        }
    }

    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& g : out.w1) g *= inv;
    for (auto& g : out.b1) g *= inv;
    for (auto& g : out.w2) g *= inv;
    for (auto& g : out.b2) g *= inv;
    return loss * inv;
}

TrainResult train(const LabeledDataset& data, int band_index, std::size_t hidden_size,
                  const TrainConfig& cfg) {
    validate(cfg);
    if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (data.labels.size() != data.size())
        throw std::invalid_argument("train: feature/label count mismatch");
    std::array<std::size_t, num_classes> counts{};
    for (int label : data.labels) {
        if (label < 1 || label > static_cast<int>(num_classes))
            throw std::invalid_argument("train: label out of range");
        ++counts[static_cast<std::size_t>(label - 1)];
    }
    for (std::size_t c = 0; c < num_classes; ++c)
        if (counts[c] == 0)
            throw std::invalid_argument(std::string("train: no examples for class ") +
                                        class_names[c]);

    Rng rng(cfg.seed);
    BandClassifier m = init_classifier(band_index, hidden_size, rng);
    m.train_seed = cfg.seed;

    // Per-feature standardization from the whole dataset.
    for (std::size_t i = 0; i < m.input_size; ++i) {
        double mean = 0.0;
        for (const auto& f : data.features) mean += f[i];
        mean /= static_cast<double>(data.size());
        double var = 0.0;
        for (const auto& f : data.features) var += (f[i] - mean) * (f[i] - mean);
        var /= static_cast<double>(data.size());
        m.feature_mean[i] = mean;
        m.feature_scale[i] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }

    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0);
    shuffle_indices(idx, rng);
    auto n_val = static_cast<std::size_t>(
        std::llround(cfg.validation_fraction * static_cast<double>(data.size())));
    n_val = std::clamp<std::size_t>(n_val, 1, data.size() - 1);
    std::vector<std::size_t> val_rows(idx.end() - static_cast<std::ptrdiff_t>(n_val), idx.end());
    std::vector<std::size_t> train_rows(idx.begin(),
                                        idx.end() - static_cast<std::ptrdiff_t>(n_val));

    Gradients grad, vel;
    vel.w1.assign(m.w1.size(), 0.0);
    vel.b1.assign(m.b1.size(), 0.0);
    vel.w2.assign(m.w2.size(), 0.0);
    vel.b2.assign(m.b2.size(), 0.0);

    const auto step = [&](std::vector<double>& w, std::vector<double>& v,
                          const std::vector<double>& g) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            v[i] = cfg.momentum * v[i] - cfg.learning_rate * g[i];
            w[i] += v[i];
        }
    };

    TrainResult result;
    BandClassifier best = m;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    std::vector<std::size_t> batch;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_indices(train_rows, rng);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < train_rows.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(start + cfg.batch_size, train_rows.size());
            batch.assign(train_rows.begin() + static_cast<std::ptrdiff_t>(start),
                         train_rows.begin() + static_cast<std::ptrdiff_t>(stop));
            epoch_loss += batch_loss_and_gradient(m, data, batch, grad);
            ++n_batches;
            step(m.w1, vel.w1, grad.w1);
            step(m.b1, vel.b1, grad.b1);
            step(m.w2, vel.w2, grad.w2);
            step(m.b2, vel.b2, grad.b2);
        }
        epoch_loss /= static_cast<double>(n_batches);
        const double val_loss = dataset_loss(m, data, val_rows);
        if (!std::isfinite(epoch_loss) || !std::isfinite(val_loss))
            throw std::runtime_error("train: diverged at epoch " + std::to_string(epoch + 1));
        result.train_loss.push_back(epoch_loss);
        result.val_loss.push_back(val_loss);
        if (val_loss < best_val) {
            best_val = val_loss;
            best = m;
            result.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best > cfg.early_stopping_patience) {
            break;
        }
    }

    best.validation_ce = best_val;
    result.model = std::move(best);
    return result;
}

SweepResult select_hidden_size(const LabeledDataset& data, int band_index,
                               const std::vector<std::size_t>& candidates,
                               const TrainConfig& cfg) {
    if (candidates.empty()) throw std::invalid_argument("select_hidden_size: no candidates");
    SweepResult sweep;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t hidden : candidates) {
        const TrainResult r = train(data, band_index, hidden, cfg);
        sweep.entries.push_back({hidden, r.model.validation_ce});
        if (r.model.validation_ce < best) {
            best = r.model.validation_ce;
            sweep.chosen = hidden;
        }
    }
    return sweep;
}

int weighted_random_class(const std::array<double, num_classes>& p, Rng& rng) {
    double total = 0.0;
    for (double v : p) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("weighted_random_class: bad probability vector");
        total += v;
    }
    if (total <= 0.0) throw std::invalid_argument("weighted_random_class: zero probability mass");
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        acc += p[c];
        if (u < acc) return static_cast<int>(c) + 1;
    }
    return static_cast<int>(num_classes);
}

ConfusionMatrix averaged_confusion_matrix(const BandClassifier& m, const LabeledDataset& test,
                                          std::size_t num_runs, Rng& rng) {
    if (test.size() == 0) throw std::invalid_argument("confusion matrix: empty test set");
    if (num_runs == 0) throw std::invalid_argument("confusion matrix: need at least one run");

    std::vector<std::array<double, num_classes>> probs(test.size());
    std::array<double, num_classes> class_counts{};
    for (std::size_t r = 0; r < test.size(); ++r) {
        probs[r] = forward(m, test.features[r]);
        class_counts[static_cast<std::size_t>(test.labels[r] - 1)] += 1.0;
    }

    // Average the off-diagonal counts across runs, then set each diagonal to
    // the class count minus its row's off-diagonal sum so rows sum exactly.
    ConfusionMatrix cm;
    for (std::size_t run = 0; run < num_runs; ++run) {
        for (std::size_t r = 0; r < test.size(); ++r) {
            const auto truth = static_cast<std::size_t>(test.labels[r] - 1);
            const auto pred = static_cast<std::size_t>(weighted_random_class(probs[r], rng) - 1);
            if (pred != truth) cm.cells[truth][pred] += 1.0;
        }
    }
    for (std::size_t r = 0; r < num_classes; ++r) {
        double off = 0.0;
        for (std::size_t c = 0; c < num_classes; ++c) {
            if (c == r) continue;
            cm.cells[r][c] /= static_cast<double>(num_runs);
            off += cm.cells[r][c];
        }
        cm.cells[r][r] = class_counts[r] - off;
    }
    return cm;
}

}  // namespace specorr
