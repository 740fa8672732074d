#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specorr/acquisition.hpp"
#include "specorr/ann.hpp"
#include "specorr/essc.hpp"

namespace specorr {

struct SincConfig {
    std::size_t num_samples = 10000;
    double center = 0.5;
    double bandwidth = 3.75;

    friend bool operator==(const SincConfig&, const SincConfig&) = default;
};

struct Seeds {
    std::uint64_t dataset = 1001;
    std::uint64_t train = 2002;
    std::uint64_t eval = 3003;
    std::uint64_t correct = 4004;

    friend bool operator==(const Seeds&, const Seeds&) = default;
};

struct RunConfig {
    double nu_max = 7.5;
    std::size_t max_band_index = 4;
    SincConfig sinc;
    NoiseConfig noise;
    ConditioningConfig conditioning;
    TrainConfig training;
    std::vector<std::size_t> hidden_candidates{5, 10, 15, 20, 25, 30, 35, 40};
    std::vector<double> attenuation_levels{1.0, 0.75, 0.5, 0.25, 0.0};
    std::size_t samples_per_class = 1000;
    std::size_t confusion_runs = 50;
    Seeds seeds;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

void validate(const RunConfig& cfg);

RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& cfg);

RunConfig load_config(const std::string& path);
void save_config(const std::string& path, const RunConfig& cfg);

}  // namespace specorr
