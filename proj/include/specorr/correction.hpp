#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "specorr/acquisition.hpp"
#include "specorr/ann.hpp"
#include "specorr/essc.hpp"
#include "specorr/spectral.hpp"

namespace specorr {

// Attenuated-waveform set for one band: one member per attenuation level.
struct AwSet {
    int band = 0;
    std::vector<double> levels;   // descending, last entry 0
    std::vector<Signal> members;  // f - level * g_band
};

AwSet build_awset(const Signal& original, const FilterBank& bank, int band,
                  const std::vector<double>& levels);

// Classes 1..n_levels: samples_per_class fingerprints of the matching AwSet
// member pushed through acquisition + conditioning. Class NB: the same count
// drawn evenly from the other bands' attenuated waveforms, each donor block
// split across the nonzero levels (remainder goes to the last level).
LabeledDataset build_training_dataset(const Signal& original, const FilterBank& bank, int band,
                                      std::size_t samples_per_class,
                                      const std::vector<double>& levels, const NoiseConfig& noise,
                                      const ConditioningConfig& conditioning,
                                      std::uint64_t base_seed);

// Expected attenuation under the class probabilities: sum over the nonzero
// levels of level_c * p_c.
double mean_correction_factor(const std::array<double, num_classes>& p,
                              const std::vector<double>& levels);

// idft(F * prod_n f_n^{q_n}); exponents has one entry per band.
Signal generalized_wavelet(const Signal& original, const FilterBank& bank,
                           const std::vector<unsigned>& exponents);

inline constexpr double correction_factor_cap = 0.99;

// Closed-form inverse filter: idft(F * prod_n (1 - factors[n] * f_n)^-1).
// Every factor must be below the cap.
Signal corrected_signal(const Signal& original, const FilterBank& bank,
                        const std::vector<double>& factors);

// Multinomial expansion of the inverse filter truncated at total order
// sum(q) <= max_total_order, evaluated with generalized wavelets.
Signal corrected_signal_series(const Signal& original, const FilterBank& bank,
                               const std::vector<double>& factors, unsigned max_total_order);

// idft(F * prod_n (1 - factors[n] * f_n)): the output of a system whose
// response is the factor product.
Signal apply_system_response(const Signal& s, const FilterBank& bank,
                             const std::vector<double>& factors);

struct CorrectionResult {
    std::vector<double> factors;  // mean correction factor per band
    std::vector<std::array<double, num_classes>> band_probabilities;
    Signal corrected;
    bool factor_capped = false;  // a factor hit the inversion cap and was clamped
};

// Conditions the captured input, fingerprints it once, reads every band
// classifier's probabilities, converts them to mean correction factors and
// rebuilds the corrected signal from the clean original.
CorrectionResult run_correction(const Signal& real_input, const Signal& original,
                                const std::vector<BandClassifier>& models,
                                const FilterBank& bank, const std::vector<double>& levels,
                                const ConditioningConfig& conditioning);

struct EndToEndResult {
    CorrectionResult correction;
    Signal system_output;  // original through the true system response
    Signal acquired;       // system output through the capture chain
    Signal restored;       // corrected signal through the true system response
    double rms_error = 0.0;
};

// Full loop: true system -> acquisition -> correction -> corrected signal
// pushed back through the true system, scored against the original.
EndToEndResult end_to_end_eval(const std::vector<double>& true_factors, const Signal& original,
                               const std::vector<BandClassifier>& models, const FilterBank& bank,
                               const std::vector<double>& levels, const NoiseConfig& noise,
                               const ConditioningConfig& conditioning, Rng& rng);

// Distinguishable attenuation patterns across one bank: the levels on the
// band under test plus the nonzero levels on every other band.
constexpr std::size_t pattern_count(std::size_t n_levels, std::size_t max_band_index) {
    return n_levels + (n_levels - 1) * max_band_index;
}

}  // namespace specorr
