#include "specorr/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specorr {

double peak_abs(const Signal& s) {
    double peak = 0.0;
    for (double v : s.samples) peak = std::max(peak, std::abs(v));
    return peak;
}

Signal sinc_pulse(std::size_t num_samples, double center, double bandwidth) {
    if (num_samples < 16) throw std::invalid_argument("sinc_pulse: need at least 16 samples");
    if (bandwidth <= 0.0) throw std::invalid_argument("sinc_pulse: bandwidth must be positive");
    if (center <= 0.0 || center >= 1.0)
        throw std::invalid_argument("sinc_pulse: center must lie inside (0, 1)");

    Signal s;
    s.t0 = 0.0;
    s.dt = 1.0 / static_cast<double>(num_samples - 1);
    s.samples.resize(num_samples);
    const double a = 2.0 * std::numbers::pi * bandwidth;
    for (std::size_t i = 0; i < num_samples; ++i) {
        const double arg = a * (s.time_at(i) - center);
        s.samples[i] = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
    }
    return s;
}

Signal normalize(const Signal& s) {
    if (s.samples.size() < 2) throw std::invalid_argument("normalize: signal too short");
    const auto [lo, hi] = std::minmax_element(s.samples.begin(), s.samples.end());
    if (*lo == *hi) throw std::domain_error("normalize: constant signal (zero dynamic range)");

    Signal out;
    out.t0 = 0.0;
    out.dt = 1.0 / static_cast<double>(s.samples.size() - 1);
    out.samples.resize(s.samples.size());
    const double peak = peak_abs(s);
    for (std::size_t i = 0; i < s.samples.size(); ++i) out.samples[i] = s.samples[i] / peak;
    return out;
}

double rms_error_percent(const Signal& observed, const Signal& reference) {
    if (observed.samples.size() != reference.samples.size())
        throw std::invalid_argument("rms_error_percent: sample counts differ");
    if (observed.samples.empty())
        throw std::invalid_argument("rms_error_percent: empty signals");
    const double span = std::max({std::abs(observed.t0), std::abs(reference.t0), 1.0});
    if (std::abs(observed.t0 - reference.t0) > 1e-12 * span ||
        std::abs(observed.dt - reference.dt) > 1e-12 * std::max(observed.dt, reference.dt))
        throw std::invalid_argument("rms_error_percent: time grids differ");

    const double peak = peak_abs(reference);
    if (peak == 0.0) throw std::domain_error("rms_error_percent: zero reference signal");

    double acc = 0.0;
    for (std::size_t i = 0; i < observed.samples.size(); ++i) {
        const double d = observed.samples[i] - reference.samples[i];
        acc += d * d;
    }
    return 100.0 / peak * std::sqrt(acc / static_cast<double>(observed.samples.size()));
}

}  // namespace specorr
