#include "specorr/essc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specorr {

namespace {

// The located pulse region is widened symmetrically until it spans this
// fraction of the record before cropping.
constexpr double pulse_window_fraction = 1.0;

double median_of(std::vector<double>& buf) {
    const std::size_t mid = buf.size() / 2;
    std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
    double m = buf[mid];
    if (buf.size() % 2 == 0) {
        const auto lower =
            std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + *lower);
    }
    return m;
}

struct MomentSet {
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, m5 = 0.0;
};

MomentSet moments_up_to_fifth(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("moments: empty signal");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    MomentSet m;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
        m.m5 += d2 * d2 * d;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    m.m5 /= n;
    return m;
}

}  // namespace

void validate(const ConditioningConfig& cfg) {
    if (cfg.median_window < 1 || cfg.median_window % 2 == 0)
        throw std::invalid_argument("conditioning: median window must be odd and >= 1");
    if (cfg.mean_window < 1 || cfg.mean_window % 2 == 0)
        throw std::invalid_argument("conditioning: mean window must be odd and >= 1");
    if (cfg.pulse_threshold_fraction <= 0.0 || cfg.pulse_threshold_fraction >= 1.0)
        throw std::invalid_argument("conditioning: pulse threshold fraction must lie in (0, 1)");
    if (cfg.baseline_fraction <= 0.0 || cfg.baseline_fraction > 0.5)
        throw std::invalid_argument("conditioning: baseline fraction must lie in (0, 0.5]");
}

Signal median_filter(const Signal& s, std::size_t window) {
    if (window % 2 == 0) throw std::invalid_argument("median_filter: window must be odd");
    Signal out = s;
    if (window == 1 || s.samples.size() < 2) return out;
    const std::size_t n = s.samples.size();
    const std::size_t half = window / 2;
    std::vector<double> buf;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = std::min({half, i, n - 1 - i});  // symmetric shrink at edges
        buf.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(i - r),
                   s.samples.begin() + static_cast<std::ptrdiff_t>(i + r + 1));
        out.samples[i] = median_of(buf);
    }
    return out;
}

Signal moving_mean(const Signal& s, std::size_t window) {
    if (window % 2 == 0) throw std::invalid_argument("moving_mean: window must be odd");
    Signal out = s;
    if (window == 1 || s.samples.size() < 2) return out;
    const std::size_t n = s.samples.size();
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = std::min({half, i, n - 1 - i});
        double acc = 0.0;
        for (std::size_t j = i - r; j <= i + r; ++j) acc += s.samples[j];
        out.samples[i] = acc / static_cast<double>(2 * r + 1);
    }
    return out;
}

Signal condition(const Signal& raw, const ConditioningConfig& cfg) {
    validate(cfg);
    const std::size_t n = raw.samples.size();
    if (n < std::max({cfg.median_window, cfg.mean_window, std::size_t{16}}))
        throw std::invalid_argument("condition: too few samples");

    Signal s = moving_mean(median_filter(raw, cfg.median_window), cfg.mean_window);

    // Baseline: average of the samples nearest the median level.
    std::vector<double> buf = s.samples;
    const double med = median_of(buf);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.baseline_fraction * static_cast<double>(n))));
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count - 1),
                     order.end(), [&](std::size_t a, std::size_t b) {
                         return std::abs(s.samples[a] - med) < std::abs(s.samples[b] - med);
                     });
    double baseline = 0.0;
    for (std::size_t i = 0; i < count; ++i) baseline += s.samples[order[i]];
    baseline /= static_cast<double>(count);
    for (auto& v : s.samples) v -= baseline;

    // Pulse location: contiguous run above the threshold around the peak.
    const double peak = peak_abs(s);
    if (peak == 0.0) throw std::domain_error("condition: no pulse found (zero dynamic range)");
    const double threshold = cfg.pulse_threshold_fraction * peak;
    std::size_t ipeak = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(s.samples[i]) > std::abs(s.samples[ipeak])) ipeak = i;
    std::size_t lo = ipeak, hi = ipeak;
    while (lo > 0 && std::abs(s.samples[lo - 1]) > threshold) --lo;
    while (hi + 1 < n && std::abs(s.samples[hi + 1]) > threshold) ++hi;

    // Widen symmetrically to the configured fraction of the record.
    const auto target = std::min(
        n, std::max(hi - lo + 1, static_cast<std::size_t>(std::llround(
                                     pulse_window_fraction * static_cast<double>(n)))));
    std::size_t extra = target - (hi - lo + 1);
    std::size_t grow_left = extra / 2, grow_right = extra - extra / 2;
    if (grow_left > lo) {
        grow_right += grow_left - lo;
        grow_left = lo;
    }
    if (hi + grow_right >= n) {
        const std::size_t spill = hi + grow_right - (n - 1);
        grow_left = std::min(lo, grow_left + spill);
        grow_right = n - 1 - hi;
    }
    lo -= grow_left;
    hi += grow_right;

    Signal out;
    out.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(lo),
                       s.samples.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    const double amp = peak_abs(out);
    for (auto& v : out.samples) v /= amp;
    out.t0 = 0.0;
    out.dt = 1.0 / static_cast<double>(out.samples.size() - 1);
    return out;
}

Signal derivative(const Signal& s) {
    const std::size_t n = s.samples.size();
    if (n < 2) throw std::invalid_argument("derivative: need at least 2 samples");
    Signal out = s;
    out.samples[0] = (s.samples[1] - s.samples[0]) / s.dt;
    out.samples[n - 1] = (s.samples[n - 1] - s.samples[n - 2]) / s.dt;
    for (std::size_t i = 1; i + 1 < n; ++i)
        out.samples[i] = (s.samples[i + 1] - s.samples[i - 1]) / (2.0 * s.dt);
    return out;
}

Signal integral(const Signal& s) {
    const std::size_t n = s.samples.size();
    if (n < 2) throw std::invalid_argument("integral: need at least 2 samples");
    Signal out = s;
    out.samples[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        out.samples[i] = out.samples[i - 1] + 0.5 * (s.samples[i] + s.samples[i - 1]) * s.dt;
    return out;
}

std::vector<std::size_t> waveform_extrema(const std::vector<double>& x, double hysteresis) {
    std::vector<std::size_t> extrema;
    const std::size_t n = x.size();
    if (n < 3) return extrema;
    if (hysteresis < 0.0) throw std::invalid_argument("waveform_extrema: negative hysteresis");

    const auto reversed = [hysteresis](double from, double to) {
        return hysteresis > 0.0 ? from - to >= hysteresis : from > to;
    };

    int dir = 0;
    std::size_t hi_first = 0, hi_last = 0, lo_first = 0, lo_last = 0;
    double hi_val = x[0], lo_val = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double v = x[i];
        if (dir >= 0) {
            if (v > hi_val) {
                hi_val = v;
                hi_first = hi_last = i;
            } else if (v == hi_val && i == hi_last + 1) {
                hi_last = i;  // plateau run extends
            }
        }
        if (dir <= 0) {
            if (v < lo_val) {
                lo_val = v;
                lo_first = lo_last = i;
            } else if (v == lo_val && i == lo_last + 1) {
                lo_last = i;
            }
        }
        if (dir >= 0 && reversed(hi_val, v)) {
            extrema.push_back((hi_first + hi_last) / 2);
            dir = -1;
            lo_val = v;
            lo_first = lo_last = i;
        } else if (dir <= 0 && reversed(v, lo_val)) {
            extrema.push_back((lo_first + lo_last) / 2);
            dir = 1;
            hi_val = v;
            hi_first = hi_last = i;
        }
    }

    // keep interior points only
    std::erase_if(extrema, [n](std::size_t e) { return e == 0 || e + 1 >= n; });
    return extrema;
}

SscParams ssc_params(const Signal& s, double hysteresis_fraction) {
    const auto [lo, hi] = std::minmax_element(s.samples.begin(), s.samples.end());
    double h = hysteresis_fraction * (*hi - *lo);
    if (hysteresis_fraction > 0.0 && s.samples.size() > 1) {
        // Noise floor: reversals smaller than a few median sample-to-sample
        // steps are jitter, not segment boundaries.
        std::vector<double> steps(s.samples.size() - 1);
        for (std::size_t i = 0; i + 1 < s.samples.size(); ++i)
            steps[i] = std::abs(s.samples[i + 1] - s.samples[i]);
        h = std::max(h, ssc_noise_rejection * median_of(steps));
    }
    const auto extrema = waveform_extrema(s.samples, h);
    if (extrema.size() < 2)
        throw std::domain_error("ssc_params: fewer than two interior extrema");

    const std::size_t k = extrema.size() - 1;
    std::vector<double> amp(k), per(k);
    for (std::size_t i = 0; i < k; ++i) {
        amp[i] = std::abs(s.samples[extrema[i + 1]] - s.samples[extrema[i]]);
        per[i] = 2.0 * (s.time_at(extrema[i + 1]) - s.time_at(extrema[i]));
    }
    SscParams p;
    for (std::size_t i = 0; i < k; ++i) {
        p.amplitude_mean += amp[i];
        p.period_mean += per[i];
    }
    p.amplitude_mean /= static_cast<double>(k);
    p.period_mean /= static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
        p.amplitude_deviation += std::abs(amp[i] - p.amplitude_mean);
        p.period_deviation += std::abs(per[i] - p.period_mean);
    }
    p.amplitude_deviation /= static_cast<double>(k);
    p.period_deviation /= static_cast<double>(k);
    return p;
}

std::array<double, 3> central_moments(const Signal& s) {
    const MomentSet m = moments_up_to_fifth(s.samples);
    return {m.m2, m.m3, m.m4};
}

std::array<double, 3> cumulants(const Signal& s) {
    const MomentSet m = moments_up_to_fifth(s.samples);
    return {m.m3, m.m4 - 3.0 * m.m2 * m.m2, m.m5 - 10.0 * m.m3 * m.m2};
}

Fingerprint fingerprint(const Signal& conditioned) {
    Fingerprint fp;
    const Signal waves[3] = {conditioned, derivative(conditioned), integral(conditioned)};
    std::size_t k = 0;
    for (const Signal& w : waves) {
        SscParams ssc;
        try {
            ssc = ssc_params(w);
        } catch (const std::domain_error&) {
            try {
                ssc = ssc_params(w, 0.0);  // hysteresis left nothing; use the raw extrema
            } catch (const std::domain_error&) {
                // monotone wave, no segments at all; leave the four parameters 0
            }
        }
        const auto m = central_moments(w);
        const auto c = cumulants(w);
        fp.values[k++] = ssc.amplitude_mean;
        fp.values[k++] = ssc.period_mean;
        fp.values[k++] = ssc.amplitude_deviation;
        fp.values[k++] = ssc.period_deviation;
        fp.values[k++] = m[0];
        fp.values[k++] = m[1];
        fp.values[k++] = m[2];
        fp.values[k++] = c[0];
        fp.values[k++] = c[1];
        fp.values[k++] = c[2];
    }
    return fp;
}

}  // namespace specorr
