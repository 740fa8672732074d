#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "specorr/essc.hpp"
#include "specorr/rng.hpp"

namespace specorr {

inline constexpr std::size_t num_classes = 6;

// Class meaning: 1..5 = attenuation levels (descending, 0 last), 6 = NB
// (attenuation in another band).
inline constexpr std::array<const char*, num_classes> class_names = {
    "100%", "75%", "50%", "25%", "0%", "NB"};

struct LabeledDataset {
    std::vector<std::array<double, fingerprint_size>> features;
    std::vector<int> labels;  // 1..6

    // Row provenance, filled by the dataset builders (not serialized to CSV).
    std::vector<int> source_band;        // band whose attenuation produced the row
    std::vector<double> source_level;    // attenuation depth used

    std::size_t size() const { return features.size(); }
};

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    double momentum = 0.9;
    double validation_fraction = 0.2;
    std::size_t early_stopping_patience = 20;
    std::uint64_t seed = 2002;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

void validate(const TrainConfig& cfg);

// 30 -> hidden (tanh) -> 6 (softmax), with per-feature standardization folded
// into the model. Weights are row-major: w1[h*input+i], w2[c*hidden+h].
struct BandClassifier {
    int band_index = 0;
    std::size_t input_size = fingerprint_size;
    std::size_t hidden_size = 20;
    std::vector<double> w1, b1, w2, b2;
    std::vector<double> feature_mean, feature_scale;
    double z_clip = 4.0;  // standardized inputs are clamped to +-z_clip
    std::uint64_t train_seed = 0;
    double validation_ce = 0.0;

    friend bool operator==(const BandClassifier&, const BandClassifier&) = default;
};

BandClassifier init_classifier(int band_index, std::size_t hidden_size, Rng& rng);

std::array<double, num_classes> forward(const BandClassifier& m,
                                        const std::array<double, fingerprint_size>& x);

double cross_entropy(const std::array<double, num_classes>& p, int label);

struct Gradients {
    std::vector<double> w1, b1, w2, b2;
};

// Mean cross-entropy over the batch plus its gradient in `out`.
double batch_loss_and_gradient(const BandClassifier& m, const LabeledDataset& data,
                               const std::vector<std::size_t>& batch, Gradients& out);

struct TrainResult {
    BandClassifier model;
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::size_t best_epoch = 0;
};

// Mini-batch gradient descent with momentum and validation-based early
// stopping; restores the best-validation weights.
TrainResult train(const LabeledDataset& data, int band_index, std::size_t hidden_size,
                  const TrainConfig& cfg);

struct SweepEntry {
    std::size_t hidden_size = 0;
    double validation_ce = 0.0;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    std::size_t chosen = 0;  // hidden size with the lowest validation CE
};

SweepResult select_hidden_size(const LabeledDataset& data, int band_index,
                               const std::vector<std::size_t>& candidates,
                               const TrainConfig& cfg);

// Samples a class (1-based) from the probability vector.
int weighted_random_class(const std::array<double, num_classes>& p, Rng& rng);

struct ConfusionMatrix {
    // cells[r][c]: true class r+1 predicted as c+1, averaged over runs
    std::array<std::array<double, num_classes>, num_classes> cells{};
};

// Repeats the weighted-random prediction pass `num_runs` times over the same
// test set; off-diagonal cells are averaged and each diagonal cell is the
// class count minus its row's off-diagonal sum.
ConfusionMatrix averaged_confusion_matrix(const BandClassifier& m, const LabeledDataset& test,
                                          std::size_t num_runs, Rng& rng);

}  // namespace specorr
