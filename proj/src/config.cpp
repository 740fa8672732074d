#include "specorr/config.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace specorr {

namespace {

using nlohmann::json;

json to_json(const SincConfig& c) {
    return {{"num_samples", c.num_samples}, {"center", c.center}, {"bandwidth", c.bandwidth}};
}

json to_json(const NoiseConfig& c) {
    return {{"decimation_factor", c.decimation_factor},
            {"jitter_max_samples", c.jitter_max_samples},
            {"scale_reduction_max", c.scale_reduction_max},
            {"offset_max_fraction", c.offset_max_fraction},
            {"gaussian_sigma_fraction", c.gaussian_sigma_fraction},
            {"seed", c.seed}};
}

json to_json(const ConditioningConfig& c) {
    return {{"median_window", c.median_window},
            {"mean_window", c.mean_window},
            {"pulse_threshold_fraction", c.pulse_threshold_fraction},
            {"baseline_fraction", c.baseline_fraction}};
}

json to_json(const TrainConfig& c) {
    return {{"learning_rate", c.learning_rate},
            {"epochs", c.epochs},
            {"batch_size", c.batch_size},
            {"momentum", c.momentum},
            {"validation_fraction", c.validation_fraction},
            {"early_stopping_patience", c.early_stopping_patience},
            {"seed", c.seed}};
}

json to_json(const Seeds& c) {
    return {{"dataset", c.dataset}, {"train", c.train}, {"eval", c.eval}, {"correct", c.correct}};
}

// Missing keys keep their defaults so partial configs stay usable.
template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
    if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

void validate(const RunConfig& cfg) {
    if (cfg.nu_max <= 0.0) throw std::invalid_argument("config: nu_max must be > 0");
    if (cfg.max_band_index < 1) throw std::invalid_argument("config: max_band_index must be >= 1");
    if (cfg.sinc.num_samples < 16) throw std::invalid_argument("config: sinc too short");
    if (cfg.sinc.center <= 0.0 || cfg.sinc.center >= 1.0)
        throw std::invalid_argument("config: sinc center must lie in (0, 1)");
    if (cfg.sinc.bandwidth <= 0.0) throw std::invalid_argument("config: sinc bandwidth must be > 0");
    validate(cfg.noise);
    validate(cfg.conditioning);
    validate(cfg.training);
    if (cfg.hidden_candidates.empty())
        throw std::invalid_argument("config: hidden_candidates must not be empty");
    for (std::size_t h : cfg.hidden_candidates)
        if (h == 0) throw std::invalid_argument("config: hidden sizes must be >= 1");
    if (cfg.attenuation_levels.size() != num_classes - 1)
        throw std::invalid_argument("config: need one attenuation level per non-NB class");
    for (std::size_t i = 0; i < cfg.attenuation_levels.size(); ++i) {
        const double v = cfg.attenuation_levels[i];
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("config: attenuation levels must lie in [0, 1]");
        if (i > 0 && v >= cfg.attenuation_levels[i - 1])
            throw std::invalid_argument("config: attenuation levels must be strictly descending");
    }
    if (cfg.attenuation_levels.back() != 0.0)
        throw std::invalid_argument("config: last attenuation level must be 0");
    if (cfg.samples_per_class == 0)
        throw std::invalid_argument("config: samples_per_class must be >= 1");
    if (cfg.confusion_runs == 0) throw std::invalid_argument("config: confusion_runs must be >= 1");
}

RunConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: bad JSON: ") + e.what());
    }
    RunConfig cfg;
    get_if_present(j, "nu_max", cfg.nu_max);
    get_if_present(j, "max_band_index", cfg.max_band_index);
    if (j.contains("sinc")) {
        const json& s = j["sinc"];
        get_if_present(s, "num_samples", cfg.sinc.num_samples);
        get_if_present(s, "center", cfg.sinc.center);
        get_if_present(s, "bandwidth", cfg.sinc.bandwidth);
    }
    if (j.contains("noise")) {
        const json& s = j["noise"];
        get_if_present(s, "decimation_factor", cfg.noise.decimation_factor);
        get_if_present(s, "jitter_max_samples", cfg.noise.jitter_max_samples);
        get_if_present(s, "scale_reduction_max", cfg.noise.scale_reduction_max);
        get_if_present(s, "offset_max_fraction", cfg.noise.offset_max_fraction);
        get_if_present(s, "gaussian_sigma_fraction", cfg.noise.gaussian_sigma_fraction);
        get_if_present(s, "seed", cfg.noise.seed);
    }
    if (j.contains("conditioning")) {
        const json& s = j["conditioning"];
        get_if_present(s, "median_window", cfg.conditioning.median_window);
        get_if_present(s, "mean_window", cfg.conditioning.mean_window);
        get_if_present(s, "pulse_threshold_fraction", cfg.conditioning.pulse_threshold_fraction);
        get_if_present(s, "baseline_fraction", cfg.conditioning.baseline_fraction);
    }
    if (j.contains("training")) {
        const json& s = j["training"];
        get_if_present(s, "learning_rate", cfg.training.learning_rate);
        get_if_present(s, "epochs", cfg.training.epochs);
        get_if_present(s, "batch_size", cfg.training.batch_size);
        get_if_present(s, "momentum", cfg.training.momentum);
        get_if_present(s, "validation_fraction", cfg.training.validation_fraction);
        get_if_present(s, "early_stopping_patience", cfg.training.early_stopping_patience);
        get_if_present(s, "seed", cfg.training.seed);
    }
    get_if_present(j, "hidden_candidates", cfg.hidden_candidates);
    get_if_present(j, "attenuation_levels", cfg.attenuation_levels);
    get_if_present(j, "samples_per_class", cfg.samples_per_class);
    get_if_present(j, "confusion_runs", cfg.confusion_runs);
    if (j.contains("seeds")) {
        const json& s = j["seeds"];
        get_if_present(s, "dataset", cfg.seeds.dataset);
        get_if_present(s, "train", cfg.seeds.train);
        get_if_present(s, "eval", cfg.seeds.eval);
        get_if_present(s, "correct", cfg.seeds.correct);
    }
    validate(cfg);
    return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
    const json j = {{"nu_max", cfg.nu_max},
                    {"max_band_index", cfg.max_band_index},
                    {"sinc", to_json(cfg.sinc)},
                    {"noise", to_json(cfg.noise)},
                    {"conditioning", to_json(cfg.conditioning)},
                    {"training", to_json(cfg.training)},
                    {"hidden_candidates", cfg.hidden_candidates},
                    {"attenuation_levels", cfg.attenuation_levels},
                    {"samples_per_class", cfg.samples_per_class},
                    {"confusion_runs", cfg.confusion_runs},
                    {"seeds", to_json(cfg.seeds)}};
    return j.dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

void save_config(const std::string& path, const RunConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << config_to_json(cfg);
}

}  // namespace specorr
