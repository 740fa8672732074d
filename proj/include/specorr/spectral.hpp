#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "specorr/signal.hpp"

namespace specorr {

// Frequency-domain image of a Signal on its native length-N bin grid.
// The upper half of `bins` carries the negative frequencies.
struct Spectrum {
    std::vector<std::complex<double>> bins;
    double dnu = 1.0;
    std::size_t num_time_samples = 0;  // equals bins.size(); idft restores this many samples
    double t0 = 0.0;
    double dt = 1.0;

    std::size_t size() const { return bins.size(); }
    double frequency_at(std::size_t k) const {
        const auto n = bins.size();
        return (k <= n / 2 ? static_cast<double>(k)
                           : static_cast<double>(k) - static_cast<double>(n)) *
               dnu;
    }
};

// Cosine-profile band geometry: max_index + 1 bands covering |nu| <= nu_max,
// band width delta_nu = 2*nu_max/max_index, centers at n*delta_nu/2.
struct FilterBank {
    double nu_max = 7.5;
    std::size_t max_index = 4;

    double delta_nu() const { return 2.0 * nu_max / static_cast<double>(max_index); }
    double center(std::size_t n) const { return static_cast<double>(n) * delta_nu() / 2.0; }
    std::size_t num_bands() const { return max_index + 1; }

    friend bool operator==(const FilterBank&, const FilterBank&) = default;
};

FilterBank make_filter_bank(double nu_max, std::size_t max_index);

struct FilterProfile {
    std::vector<double> values;  // one per grid point
};

// In-place iterative radix-2 transform; size must be a power of two. dft/idft
// run on it directly for power-of-two lengths and through a chirp-z wrapper
// otherwise, so every Signal transforms at its own length.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

Spectrum dft(const Signal& s);
Signal idft(const Spectrum& spec);

std::vector<double> bin_frequencies(const Spectrum& spec);

// Single cosine-profile filter evaluated at one frequency.
double cos_filter_value(const FilterBank& bank, std::size_t n, double nu);

FilterProfile cos_filter_profile(const FilterBank& bank, std::size_t n,
                                 const std::vector<double>& grid);

// max |sum_n f_n(nu) - 1| over grid points with |nu| <= nu_max.
double partition_of_unity_check(const FilterBank& bank, const std::vector<double>& grid);

// Fraction of spectral energy at |nu| > nu_max.
double out_of_band_energy_fraction(const Spectrum& spec, const FilterBank& bank);

Spectrum apply_profile(const Spectrum& spec, const FilterProfile& profile);

// Band wavelets g_n(t) = idft(F * f_n); they sum back to the band-limited
// part of the input.
std::vector<Signal> decompose(const Signal& s, const FilterBank& bank);

// 1 - delta_a * f_n(nu)
FilterProfile band_rejection_profile(const FilterBank& bank, std::size_t n, double delta_a,
                                     const std::vector<double>& grid);

// f(t) - delta_a * g_n(t)
Signal attenuate_band(const Signal& s, const FilterBank& bank, std::size_t n, double delta_a);

// prod_n (1 - factors[n] * f_n(nu))
FilterProfile system_response_profile(const FilterBank& bank, const std::vector<double>& factors,
                                      const std::vector<double>& grid);

}  // namespace specorr
