#include "specorr/acquisition.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specorr {

double Rng::gaussian(double mean, double sigma) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + sigma * spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + sigma * r * std::cos(theta);
}

void validate(const NoiseConfig& cfg) {
    if (cfg.decimation_factor < 1)
        throw std::invalid_argument("noise config: decimation factor must be >= 1");
    if (cfg.jitter_max_samples >= cfg.decimation_factor)
        throw std::invalid_argument("noise config: jitter range must stay within one decimation stride");
    if (cfg.scale_reduction_max < 0.0 || cfg.scale_reduction_max >= 1.0)
        throw std::invalid_argument("noise config: scale reduction must lie in [0, 1)");
    if (cfg.offset_max_fraction < 0.0)
        throw std::invalid_argument("noise config: offset fraction must be >= 0");
    if (cfg.gaussian_sigma_fraction < 0.0)
        throw std::invalid_argument("noise config: sigma fraction must be >= 0");
}

Signal simulate_acquisition(const Signal& ideal, const NoiseConfig& cfg, Rng& rng) {
    validate(cfg);
    const std::size_t n = ideal.samples.size();
    if (n < cfg.decimation_factor * 16)
        throw std::invalid_argument("simulate_acquisition: input too short for the decimation factor");

    const auto jitter = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(cfg.jitter_max_samples)));

    Signal out;
    out.t0 = ideal.t0;
    out.dt = ideal.dt * static_cast<double>(cfg.decimation_factor);
    const std::size_t m = n / cfg.decimation_factor;
    out.samples.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t src = i * cfg.decimation_factor + jitter;
        out.samples[i] = src < n ? ideal.samples[src] : 0.0;
    }

    const double scale = rng.uniform(1.0 - cfg.scale_reduction_max, 1.0);
    for (auto& v : out.samples) v *= scale;

    const double peak = peak_abs(out);
    const double offset = rng.uniform(-cfg.offset_max_fraction, cfg.offset_max_fraction) * peak;
    for (auto& v : out.samples) v += offset;

    const double sigma = cfg.gaussian_sigma_fraction * peak;
    if (sigma > 0.0)
        for (auto& v : out.samples) v += rng.gaussian(0.0, sigma);

    return out;
}

}  // namespace specorr
