#pragma once

#include <cstdint>
#include <random>

namespace specorr {

// splitmix64 step; used to whiten seeds and derive independent per-row streams.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. The distributions are implemented on top of the
// raw engine output so a given seed yields the same sequence on every
// platform, independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for item `index` of a batch seeded with `base`.
    static Rng derived(std::uint64_t base, std::uint64_t index) {
        return Rng(splitmix64(base + (index + 1) * 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t raw() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi], both inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(range));
    }

    double gaussian(double mean, double sigma);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace specorr
