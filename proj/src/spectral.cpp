#include "specorr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace specorr {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Length-n transform via the chirp-z identity: kj = (k² + j² − (j−k)²)/2 turns
// the sum into a convolution that a power-of-two transform evaluates exactly,
// so no external padding (and no post-transform truncation) is ever needed.
void bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto k2 = static_cast<unsigned long long>(k) * k % (2 * n);
        const double ang = sign * std::numbers::pi * static_cast<double>(k2) /
                           static_cast<double>(n);
        chirp[k] = {std::cos(ang), std::sin(ang)};
    }
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<std::complex<double>> u(m, {0.0, 0.0}), v(m, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        u[k] = a[k] * chirp[k];
        v[k] = std::conj(chirp[k]);
        if (k > 0) v[m - k] = std::conj(chirp[k]);
    }
    fft_radix2(u, false);
    fft_radix2(v, false);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    fft_radix2(u, true);
    for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * chirp[k];
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

void transform(std::vector<std::complex<double>>& a, bool inverse) {
    if (a.empty()) throw std::invalid_argument("transform: empty input");
    if ((a.size() & (a.size() - 1)) == 0)
        fft_radix2(a, inverse);
    else
        bluestein(a, inverse);
}

}  // namespace

FilterBank make_filter_bank(double nu_max, std::size_t max_index) {
    if (nu_max <= 0.0) throw std::invalid_argument("filter bank: nu_max must be positive");
    if (max_index < 1) throw std::invalid_argument("filter bank: need max_index >= 1");
    return FilterBank{nu_max, max_index};
}

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a nonzero power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

Spectrum dft(const Signal& s) {
    if (s.samples.empty()) throw std::invalid_argument("dft: empty signal");
    if (s.dt <= 0.0) throw std::invalid_argument("dft: non-positive sample spacing");

    Spectrum spec;
    spec.num_time_samples = s.samples.size();
    spec.t0 = s.t0;
    spec.dt = s.dt;
    spec.bins.resize(s.samples.size());
    for (std::size_t i = 0; i < s.samples.size(); ++i) spec.bins[i] = {s.samples[i], 0.0};
    transform(spec.bins, false);
    spec.dnu = 1.0 / (static_cast<double>(s.samples.size()) * s.dt);
    return spec;
}

Signal idft(const Spectrum& spec) {
    const std::size_t n = spec.bins.size();
    if (n == 0) throw std::invalid_argument("idft: empty spectrum");
    if (spec.num_time_samples != n)
        throw std::invalid_argument("idft: sample count must match bin count");

    double max_mag = 0.0;
    for (const auto& b : spec.bins) max_mag = std::max(max_mag, std::abs(b));
    double asym = 0.0;
    for (std::size_t k = 1; k < n; ++k)
        asym = std::max(asym, std::abs(spec.bins[k] - std::conj(spec.bins[n - k])));
    asym = std::max(asym, std::abs(spec.bins[0].imag()));
    // The absolute floor keeps numerically-zero spectra (e.g. a band filtered
    // down to roundoff) from tripping the relative test on their own noise.
    if (asym > 1e-9 * max_mag + 1e-12)
        throw std::domain_error("idft: spectrum is not Hermitian (asymmetry " +
                                std::to_string(asym) + ", peak " + std::to_string(max_mag) + ")");

    std::vector<std::complex<double>> work = spec.bins;
    transform(work, true);

    double max_imag = 0.0, max_real = 0.0;
    for (std::size_t i = 0; i < spec.num_time_samples; ++i) {
        max_imag = std::max(max_imag, std::abs(work[i].imag()));
        max_real = std::max(max_real, std::abs(work[i].real()));
    }
    if (max_imag > 1e-9 * max_real + 1e-12)
        throw std::domain_error("idft: residual imaginary part " + std::to_string(max_imag));

    Signal out;
    out.t0 = spec.t0;
    out.dt = spec.dt;
    out.samples.resize(spec.num_time_samples);
    for (std::size_t i = 0; i < spec.num_time_samples; ++i) out.samples[i] = work[i].real();
    return out;
}

std::vector<double> bin_frequencies(const Spectrum& spec) {
    std::vector<double> grid(spec.bins.size());
    for (std::size_t k = 0; k < spec.bins.size(); ++k) grid[k] = spec.frequency_at(k);
    return grid;
}

double cos_filter_value(const FilterBank& bank, std::size_t n, double nu) {
    if (n >= bank.num_bands()) throw std::invalid_argument("filter index out of range");
    const double width = bank.delta_nu();
    const auto gate = [width](double x) { return std::abs(x) <= width / 2.0 ? 1.0 : 0.0; };
    const double c = std::cos(2.0 * std::numbers::pi * nu / width);
    if (n == 0) return 0.5 * (1.0 + c) * gate(nu);
    const double center = bank.center(n);
    const double gates = gate(nu - center) + gate(nu + center);
    if (gates == 0.0) return 0.0;
    return n % 2 == 0 ? 0.5 * (1.0 + c) * gates : 0.5 * (1.0 - c) * gates;
}

FilterProfile cos_filter_profile(const FilterBank& bank, std::size_t n,
                                 const std::vector<double>& grid) {
    FilterProfile p;
    p.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) p.values[k] = cos_filter_value(bank, n, grid[k]);
    return p;
}

double partition_of_unity_check(const FilterBank& bank, const std::vector<double>& grid) {
    double worst = 0.0;
    for (double nu : grid) {
        if (std::abs(nu) > bank.nu_max) continue;
        double sum = 0.0;
        for (std::size_t n = 0; n < bank.num_bands(); ++n) sum += cos_filter_value(bank, n, nu);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

double out_of_band_energy_fraction(const Spectrum& spec, const FilterBank& bank) {
    double total = 0.0, outside = 0.0;
    for (std::size_t k = 0; k < spec.bins.size(); ++k) {
        const double e = std::norm(spec.bins[k]);
        total += e;
        if (std::abs(spec.frequency_at(k)) > bank.nu_max) outside += e;
    }
    return total == 0.0 ? 0.0 : outside / total;
}

Spectrum apply_profile(const Spectrum& spec, const FilterProfile& profile) {
    if (profile.values.size() != spec.bins.size())
        throw std::invalid_argument("apply_profile: profile length does not match spectrum");
    Spectrum out = spec;
    for (std::size_t k = 0; k < out.bins.size(); ++k) out.bins[k] *= profile.values[k];
    return out;
}

std::vector<Signal> decompose(const Signal& s, const FilterBank& bank) {
    const Spectrum spec = dft(s);
    const double leak = out_of_band_energy_fraction(spec, bank);
    if (leak >= 1e-3)
        std::cerr << "warning: " << leak * 100.0
                  << "% of the signal energy lies above nu_max; the wavelet sum will not "
                     "reconstruct it\n";
    const auto grid = bin_frequencies(spec);
    std::vector<Signal> wavelets;
    wavelets.reserve(bank.num_bands());
    for (std::size_t n = 0; n < bank.num_bands(); ++n)
        wavelets.push_back(idft(apply_profile(spec, cos_filter_profile(bank, n, grid))));
    return wavelets;
}

FilterProfile band_rejection_profile(const FilterBank& bank, std::size_t n, double delta_a,
                                     const std::vector<double>& grid) {
    if (delta_a < 0.0 || delta_a > 1.0)
        throw std::invalid_argument("band_rejection_profile: attenuation must lie in [0, 1]");
    FilterProfile p = cos_filter_profile(bank, n, grid);
    for (auto& v : p.values) v = 1.0 - delta_a * v;
    return p;
}

Signal attenuate_band(const Signal& s, const FilterBank& bank, std::size_t n, double delta_a) {
    const Spectrum spec = dft(s);
    const auto grid = bin_frequencies(spec);
    return idft(apply_profile(spec, band_rejection_profile(bank, n, delta_a, grid)));
}

FilterProfile system_response_profile(const FilterBank& bank, const std::vector<double>& factors,
                                      const std::vector<double>& grid) {
    if (factors.size() != bank.num_bands())
        throw std::invalid_argument("system_response_profile: need one factor per band");
    FilterProfile p;
    p.values.assign(grid.size(), 1.0);
    for (std::size_t n = 0; n < factors.size(); ++n) {
        if (factors[n] < 0.0 || factors[n] > 1.0)
            throw std::invalid_argument("system_response_profile: factors must lie in [0, 1]");
        for (std::size_t k = 0; k < grid.size(); ++k)
            p.values[k] *= 1.0 - factors[n] * cos_filter_value(bank, n, grid[k]);
    }
    return p;
}

}  // namespace specorr
