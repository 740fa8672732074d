#pragma once

#include <cstdint>

#include "specorr/rng.hpp"
#include "specorr/signal.hpp"

namespace specorr {

struct NoiseConfig {
    std::size_t decimation_factor = 10;
    std::size_t jitter_max_samples = 9;      // drawn at the ideal resolution
    double scale_reduction_max = 0.75;       // scale ~ U[1 - this, 1]
    double offset_max_fraction = 0.05;       // offset ~ U[-this, this] * peak
    double gaussian_sigma_fraction = 0.05;   // sigma = this * peak
    std::uint64_t seed = 1001;

    friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

void validate(const NoiseConfig& cfg);

// Models the capture chain: integer time jitter at the ideal resolution,
// decimation, random amplitude scale, random offset, additive Gaussian noise.
// Output length is always floor(N/M); samples shifted past the end by the
// jitter are zero.
Signal simulate_acquisition(const Signal& ideal, const NoiseConfig& cfg, Rng& rng);

}  // namespace specorr
