#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "specorr/signal.hpp"

namespace specorr {

inline constexpr std::size_t fingerprint_size = 30;

// 30-parameter statistical descriptor: for each of {signal, derivative,
// integral}: segment amplitude mean, segment period mean, segment amplitude
// deviation, segment period deviation, central moments m2 m3 m4, cumulants
// k3 k4 k5.
struct Fingerprint {
    std::array<double, fingerprint_size> values{};

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct ConditioningConfig {
    std::size_t median_window = 5;
    std::size_t mean_window = 5;
    double pulse_threshold_fraction = 0.1;
    double baseline_fraction = 0.1;

    friend bool operator==(const ConditioningConfig&, const ConditioningConfig&) = default;
};

void validate(const ConditioningConfig& cfg);

Signal median_filter(const Signal& s, std::size_t window);
Signal moving_mean(const Signal& s, std::size_t window);

// Smoothing, baseline removal, pulse location check, then amplitude and time
// normalization. Output peaks at 1 on a [0, 1] grid.
Signal condition(const Signal& raw, const ConditioningConfig& cfg);

// Central differences (one-sided at the ends), scaled by 1/dt.
Signal derivative(const Signal& s);

// Cumulative trapezoidal sum scaled by dt.
Signal integral(const Signal& s);

// Indices of interior local extrema, alternating min/max. Plateau runs
// collapse to their midpoint; reversals smaller than `hysteresis` (absolute
// units) are ignored so segmentation follows the waveform lobes rather than
// residual noise.
std::vector<std::size_t> waveform_extrema(const std::vector<double>& x, double hysteresis);

struct SscParams {
    double amplitude_mean = 0.0;
    double period_mean = 0.0;
    double amplitude_deviation = 0.0;  // mean absolute deviation
    double period_deviation = 0.0;
};

// Hysteresis threshold is hysteresis_fraction * (max - min) of the waveform,
// raised to a noise floor of ssc_noise_rejection times the median absolute
// sample-to-sample step so that jitter reversals never count as segments.
inline constexpr double default_ssc_hysteresis = 0.05;
inline constexpr double ssc_noise_rejection = 10.0;

SscParams ssc_params(const Signal& s, double hysteresis_fraction = default_ssc_hysteresis);

std::array<double, 3> central_moments(const Signal& s);  // m2, m3, m4
std::array<double, 3> cumulants(const Signal& s);        // k3, k4, k5

Fingerprint fingerprint(const Signal& conditioned);

}  // namespace specorr
