#pragma once

#include <cstddef>
#include <vector>

namespace specorr {

// Uniformly sampled real waveform with an endpoint-inclusive grid:
// t_i = t0 + i * dt.
struct Signal {
    std::vector<double> samples;
    double t0 = 0.0;
    double dt = 1.0;

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    double duration() const {
        return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1);
    }

    friend bool operator==(const Signal&, const Signal&) = default;
};

double peak_abs(const Signal& s);

// Band-limited test pulse sin(a(t-c))/(a(t-c)), a = 2*pi*bandwidth, sampled on
// [0, 1]. The removable singularity at t = c evaluates to 1.
Signal sinc_pulse(std::size_t num_samples, double center, double bandwidth);

// Rescales amplitude so max|x| == 1 and remaps the time grid to [0, 1].
Signal normalize(const Signal& s);

// 100/max|ref| * sqrt(mean((obs - ref)^2)). Grids must match.
double rms_error_percent(const Signal& observed, const Signal& reference);

}  // namespace specorr
