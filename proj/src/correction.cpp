#include "specorr/correction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specorr {

namespace {

void validate_levels(const std::vector<double>& levels) {
    if (levels.size() < 2) throw std::invalid_argument("levels: need at least two entries");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 0.0 || levels[i] > 1.0)
            throw std::invalid_argument("levels: entries must lie in [0, 1]");
        if (i > 0 && levels[i] >= levels[i - 1])
            throw std::invalid_argument("levels: entries must be strictly descending");
    }
    if (levels.back() != 0.0) throw std::invalid_argument("levels: last entry must be 0");
}

void validate_band(const FilterBank& bank, int band) {
    if (band < 0 || static_cast<std::size_t>(band) >= bank.num_bands())
        throw std::invalid_argument("band index out of range");
}

void validate_factors(const FilterBank& bank, const std::vector<double>& factors, double limit) {
    if (factors.size() != bank.num_bands())
        throw std::invalid_argument("factors: need one entry per band");
    for (std::size_t n = 0; n < factors.size(); ++n)
        if (factors[n] < 0.0 || factors[n] >= limit)
            throw std::out_of_range("factor for band " + std::to_string(n) +
                                    " outside [0, " + std::to_string(limit) + ")");
}

}  // namespace

AwSet build_awset(const Signal& original, const FilterBank& bank, int band,
                  const std::vector<double>& levels) {
    validate_band(bank, band);
    validate_levels(levels);
    AwSet set;
    set.band = band;
    set.levels = levels;
    set.members.reserve(levels.size());
    for (double level : levels)
        set.members.push_back(attenuate_band(original, bank, static_cast<std::size_t>(band), level));
    return set;
}

LabeledDataset build_training_dataset(const Signal& original, const FilterBank& bank, int band,
                                      std::size_t samples_per_class,
                                      const std::vector<double>& levels, const NoiseConfig& noise,
                                      const ConditioningConfig& conditioning,
                                      std::uint64_t base_seed) {
    validate_band(bank, band);
    validate_levels(levels);
    if (levels.size() != num_classes - 1)
        throw std::invalid_argument("dataset: need one attenuation level per non-NB class");
    if (samples_per_class == 0) throw std::invalid_argument("dataset: samples_per_class must be >= 1");

    std::vector<AwSet> sets;
    sets.reserve(bank.num_bands());
    for (std::size_t b = 0; b < bank.num_bands(); ++b)
        sets.push_back(build_awset(original, bank, static_cast<int>(b), levels));

    LabeledDataset data;
    const std::size_t total = samples_per_class * num_classes;
    data.features.reserve(total);
    data.labels.reserve(total);
    data.source_band.reserve(total);
    data.source_level.reserve(total);

    std::uint64_t row = 0;
    const auto add_rows = [&](const Signal& member, std::size_t count, int label, int src_band,
                              double src_level) {
        for (std::size_t i = 0; i < count; ++i) {
            Rng rng = Rng::derived(base_seed, row++);
            const Signal captured = simulate_acquisition(member, noise, rng);
            const Fingerprint fp = fingerprint(condition(captured, conditioning));
            data.features.push_back(fp.values);
            data.labels.push_back(label);
            data.source_band.push_back(src_band);
            data.source_level.push_back(src_level);
        }
    };

    for (std::size_t c = 0; c < levels.size(); ++c)
        add_rows(sets[static_cast<std::size_t>(band)].members[c], samples_per_class,
                 static_cast<int>(c) + 1, band, levels[c]);

    // NB class: even share per donor band, each donor block spread over the
    // nonzero levels with the remainder on the last one.
    const std::size_t n_donors = bank.num_bands() - 1;
    const std::size_t n_active = levels.size() - 1;
    std::size_t assigned = 0;
    std::size_t donor_seen = 0;
    for (std::size_t b = 0; b < bank.num_bands(); ++b) {
        if (static_cast<int>(b) == band) continue;
        ++donor_seen;
        const std::size_t block = donor_seen < n_donors
                                      ? samples_per_class / n_donors
                                      : samples_per_class - assigned;
        assigned += block;
        std::size_t block_used = 0;
        for (std::size_t c = 0; c < n_active; ++c) {
            const std::size_t share =
                c + 1 < n_active ? block / n_active : block - block_used;
            block_used += share;
            add_rows(sets[b].members[c], share, static_cast<int>(num_classes),
                     static_cast<int>(b), levels[c]);
        }
    }
    return data;
}

double mean_correction_factor(const std::array<double, num_classes>& p,
                              const std::vector<double>& levels) {
    validate_levels(levels);
    if (levels.size() >= num_classes)
        throw std::invalid_argument("mean_correction_factor: more levels than level classes");
    double factor = 0.0;
    for (std::size_t c = 0; c < levels.size(); ++c) factor += levels[c] * p[c];
    return factor;
}

Signal generalized_wavelet(const Signal& original, const FilterBank& bank,
                           const std::vector<unsigned>& exponents) {
    if (exponents.size() != bank.num_bands())
        throw std::invalid_argument("generalized_wavelet: need one exponent per band");
    Spectrum spec = dft(original);
    const auto freqs = bin_frequencies(spec);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        double w = 1.0;
        for (std::size_t n = 0; n < exponents.size(); ++n) {
            if (exponents[n] == 0) continue;
            const double f = cos_filter_value(bank, n, freqs[k]);
            w *= exponents[n] == 1 ? f : std::pow(f, static_cast<double>(exponents[n]));
        }
        spec.bins[k] *= w;
    }
    return idft(spec);
}

Signal corrected_signal(const Signal& original, const FilterBank& bank,
                        const std::vector<double>& factors) {
    validate_factors(bank, factors, correction_factor_cap);
    Spectrum spec = dft(original);
    const auto freqs = bin_frequencies(spec);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        double response = 1.0;
        for (std::size_t n = 0; n < factors.size(); ++n)
            response *= 1.0 - factors[n] * cos_filter_value(bank, n, freqs[k]);
        spec.bins[k] /= response;
    }
    return idft(spec);
}

Signal corrected_signal_series(const Signal& original, const FilterBank& bank,
                               const std::vector<double>& factors, unsigned max_total_order) {
    validate_factors(bank, factors, correction_factor_cap);
    Signal out = original;  // zero-order term passes the input through untouched
    if (max_total_order == 0) return out;

    Spectrum spec = dft(original);
    const auto freqs = bin_frequencies(spec);
    std::vector<double> profile(spec.size(), 0.0);
    std::vector<unsigned> q(factors.size(), 0);
    bool any_term = false;

    // Walk every multi-index with 1 <= sum(q) <= max_total_order; terms with a
    // zero coefficient are skipped outright.
    const auto emit = [&](const auto& self, std::size_t n, unsigned used, double coeff) -> void {
        if (n == factors.size()) {
            if (used == 0) return;
            any_term = true;
            for (std::size_t k = 0; k < profile.size(); ++k) {
                double w = 1.0;
                for (std::size_t b = 0; b < q.size(); ++b) {
                    if (q[b] == 0) continue;
                    const double f = cos_filter_value(bank, b, freqs[k]);
                    w *= q[b] == 1 ? f : std::pow(f, static_cast<double>(q[b]));
                }
                profile[k] += coeff * w;
            }
            return;
        }
        for (unsigned e = 0; used + e <= max_total_order; ++e) {
            const double c = e == 0 ? coeff : coeff * std::pow(factors[n], static_cast<double>(e));
            if (c == 0.0) break;  // zero factor kills every higher exponent too
            q[n] = e;
            self(self, n + 1, used + e, c);
        }
        q[n] = 0;
    };
    emit(emit, 0, 0, 1.0);
    if (!any_term) return out;

    for (std::size_t k = 0; k < spec.size(); ++k) spec.bins[k] *= profile[k];
    const Signal terms = idft(spec);
    for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += terms.samples[i];
    return out;
}

Signal apply_system_response(const Signal& s, const FilterBank& bank,
                             const std::vector<double>& factors) {
    validate_factors(bank, factors, std::nextafter(1.0, 2.0));
    Spectrum spec = dft(s);
    const FilterProfile response = system_response_profile(bank, factors, bin_frequencies(spec));
    return idft(apply_profile(spec, response));
}

CorrectionResult run_correction(const Signal& real_input, const Signal& original,
                                const std::vector<BandClassifier>& models,
                                const FilterBank& bank, const std::vector<double>& levels,
                                const ConditioningConfig& conditioning) {
    validate_levels(levels);
    if (models.size() != bank.num_bands())
        throw std::invalid_argument("run_correction: need one classifier per band");
    for (std::size_t b = 0; b < models.size(); ++b)
        if (models[b].band_index != static_cast<int>(b))
            throw std::invalid_argument("run_correction: classifier " + std::to_string(b) +
                                        " is for band " + std::to_string(models[b].band_index));

    const Fingerprint fp = fingerprint(condition(real_input, conditioning));

    CorrectionResult result;
    result.factors.reserve(models.size());
    result.band_probabilities.reserve(models.size());
    for (const BandClassifier& m : models) {
        const auto p = forward(m, fp.values);
        double factor = mean_correction_factor(p, levels);
        if (factor >= correction_factor_cap) {
            factor = std::nextafter(correction_factor_cap, 0.0);
            result.factor_capped = true;
        }
        result.band_probabilities.push_back(p);
        result.factors.push_back(factor);
    }
    result.corrected = corrected_signal(original, bank, result.factors);
    return result;
}

EndToEndResult end_to_end_eval(const std::vector<double>& true_factors, const Signal& original,
                               const std::vector<BandClassifier>& models, const FilterBank& bank,
                               const std::vector<double>& levels, const NoiseConfig& noise,
                               const ConditioningConfig& conditioning, Rng& rng) {
    EndToEndResult r;
    r.system_output = apply_system_response(original, bank, true_factors);
    r.acquired = simulate_acquisition(r.system_output, noise, rng);
    r.correction = run_correction(r.acquired, original, models, bank, levels, conditioning);
    r.restored = apply_system_response(r.correction.corrected, bank, true_factors);
    r.rms_error = rms_error_percent(r.restored, original);
    return r;
}

}  // namespace specorr
