#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "specorr/signal.hpp"

using namespace specorr;

TEST_CASE("sinc pulse hits 1 at its center for an odd grid") {
    const Signal f = sinc_pulse(10001, 0.5, 3.75);
    CHECK(f.samples[5000] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(peak_abs(f) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sinc pulse grid spans [0, 1] inclusive") {
    const Signal f = sinc_pulse(1000, 0.5, 3.75);
    CHECK(f.t0 == 0.0);
    CHECK(f.time_at(f.size() - 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.duration() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sinc pulse centered at 0.5 is symmetric") {
    const Signal f = sinc_pulse(10000, 0.5, 3.75);
    for (std::size_t i = 0; i < f.size(); i += 37)
        CHECK(f.samples[i] == doctest::Approx(f.samples[f.size() - 1 - i]).epsilon(1e-12));
}

TEST_CASE("sinc pulse matches the closed form away from the center") {
    const double bw = 3.75, c = 0.5;
    const Signal f = sinc_pulse(2001, c, bw);
    for (std::size_t i : {std::size_t{0}, std::size_t{123}, std::size_t{1500}}) {
        const double t = f.time_at(i);
        const double a = 2.0 * std::numbers::pi * bw * (t - c);
        CHECK(f.samples[i] == doctest::Approx(std::sin(a) / a).epsilon(1e-12));
    }
}

TEST_CASE("sinc pulse zero crossings sit at multiples of 1/(2*bandwidth)") {
    const Signal f = sinc_pulse(7501, 0.5, 3.75);
    // first zero at 0.5 + 1/7.5; grid index = t / dt
    const double t_zero = 0.5 + 1.0 / 7.5;
    const auto i = static_cast<std::size_t>(std::llround(t_zero / f.dt));
    CHECK(std::abs(f.samples[i]) < 1e-9);
}

TEST_CASE("sinc pulse argument validation") {
    CHECK_THROWS_AS(sinc_pulse(1, 0.5, 3.75), std::invalid_argument);
    CHECK_THROWS_AS(sinc_pulse(100, -0.1, 3.75), std::invalid_argument);
    CHECK_THROWS_AS(sinc_pulse(100, 1.1, 3.75), std::invalid_argument);
    CHECK_THROWS_AS(sinc_pulse(100, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("normalize rescales to unit peak on a unit grid") {
    Signal s;
    s.t0 = 2.0;
    s.dt = 0.25;
    s.samples = {0.5, -2.0, 1.0, 0.25, 0.0};
    const Signal n = normalize(s);
    CHECK(peak_abs(n) == doctest::Approx(1.0));
    CHECK(n.samples[1] == doctest::Approx(-1.0));
    CHECK(n.samples[0] == doctest::Approx(0.25));
    CHECK(n.t0 == 0.0);
    CHECK(n.time_at(n.size() - 1) == doctest::Approx(1.0));
}

TEST_CASE("normalize rejects an all-zero signal") {
    Signal s;
    s.samples = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(normalize(s), std::domain_error);
}

TEST_CASE("rms error percent against a brute-force evaluation") {
    Signal ref, obs;
    ref.samples = {1.0, -2.0, 0.5, 0.0};
    obs.samples = {1.1, -1.9, 0.6, -0.2};
    double acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double d = obs.samples[i] - ref.samples[i];
        acc += d * d;
    }
    const double expected = 100.0 / 2.0 * std::sqrt(acc / 4.0);
    CHECK(rms_error_percent(obs, ref) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rms_error_percent(ref, ref) == 0.0);
}

TEST_CASE("rms error percent wants matching grids") {
    Signal a, b;
    a.samples = {1.0, 2.0};
    b.samples = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(rms_error_percent(a, b), std::invalid_argument);
    b.samples = {1.0, 2.0};
    b.dt = 2.0;
    CHECK_THROWS_AS(rms_error_percent(a, b), std::invalid_argument);
}

TEST_CASE("peak_abs of empty signal is zero") {
    CHECK(peak_abs(Signal{}) == 0.0);
}
