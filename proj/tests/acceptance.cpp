// Acceptance gate: one self-contained check per numbered criterion, each
// printing a single PASS/FAIL line with the measured values. Run all of them
// or a subset with --criterion N (repeatable). Exit code 0 only if every
// requested criterion passed.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "specorr/config.hpp"
#include "specorr/correction.hpp"

using namespace specorr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

double rms_diff(const Signal& a, const Signal& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = a.samples[i] - b.samples[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.samples.size()));
}

// Expensive artifacts shared by criteria 7-9: the reference pulse, one
// training dataset per band and the classifiers trained from them. Built
// lazily so cheap criteria stay cheap.
struct Pipeline {
    RunConfig cfg;
    Signal f = sinc_pulse(cfg.sinc.num_samples, cfg.sinc.center, cfg.sinc.bandwidth);
    FilterBank bank = make_filter_bank(cfg.nu_max, cfg.max_band_index);
    std::vector<LabeledDataset> train_sets;
    std::vector<BandClassifier> models;

    const LabeledDataset& train_set(std::size_t b) {
        train_sets.resize(bank.num_bands());
        if (train_sets[b].size() == 0)
            train_sets[b] = build_training_dataset(f, bank, static_cast<int>(b),
                                                   cfg.samples_per_class, cfg.attenuation_levels,
                                                   cfg.noise, cfg.conditioning,
                                                   cfg.seeds.dataset + b);
        return train_sets[b];
    }

    const std::vector<BandClassifier>& all_models() {
        if (models.empty())
            for (std::size_t b = 0; b < bank.num_bands(); ++b)
                models.push_back(
                    train(train_set(b), static_cast<int>(b), 20, cfg.training).model);
        return models;
    }
};

Pipeline& pipeline() {
    static Pipeline p;
    return p;
}

// 1. The filter bank sums to one everywhere inside the analysis range.
bool criterion1(std::string& detail) {
    const auto t0 = Clock::now();
    Rng rng(101);
    double worst = 0.0;
    const auto check = [&](double nu_max, std::size_t n_max) {
        const FilterBank bank = make_filter_bank(nu_max, n_max);
        for (std::size_t i = 0; i < 4096; ++i) {
            const double nu = -nu_max + 2.0 * nu_max * static_cast<double>(i) / 4095.0;
            double sum = 0.0;
            for (std::size_t n = 0; n <= n_max; ++n) sum += cos_filter_value(bank, n, nu);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    };
    check(7.5, 4);
    for (int k = 0; k < 20; ++k)
        check(rng.uniform(0.5, 25.0), static_cast<std::size_t>(rng.uniform_int(1, 8)));
    const double secs = seconds_since(t0);
    detail = strf("max |sum-1| = %.3g (limit 1e-12) over 21 banks; %.2f s (limit 1)", worst, secs);
    return worst <= 1e-12 && secs < 1.0;
}

// 2. The fast transform agrees with the quadratic definition and inverts.
bool criterion2(std::string& detail) {
    const auto t0 = Clock::now();
    Rng rng(202);
    double worst_fwd = 0.0, worst_rt = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Signal s;
        s.samples.resize(static_cast<std::size_t>(rng.uniform_int(2, 256)));
        s.dt = 1.0 / static_cast<double>(s.samples.size());
        for (double& v : s.samples) v = rng.uniform(-1.0, 1.0);

        const std::size_t n = s.samples.size();
        std::vector<std::complex<double>> oracle(n);
        double top = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) *
                                   static_cast<double>(k) / static_cast<double>(n);
                acc += s.samples[j] * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            oracle[k] = acc;
            top = std::max(top, std::abs(acc));
        }

        const Spectrum spec = dft(s);
        for (std::size_t k = 0; k < n; ++k)
            worst_fwd = std::max(worst_fwd, std::abs(spec.bins[k] - oracle[k]) / top);

        const Signal back = idft(spec);
        const double peak = peak_abs(s);
        for (std::size_t i = 0; i < n; ++i)
            worst_rt = std::max(worst_rt, std::abs(back.samples[i] - s.samples[i]) / peak);
    }
    const double secs = seconds_since(t0);
    detail = strf("forward rel err %.3g, round-trip rel err %.3g (limits 1e-9); %.2f s (limit 5)",
                  worst_fwd, worst_rt, secs);
    return worst_fwd <= 1e-9 && worst_rt <= 1e-9 && secs < 5.0;
}

// 3. Frequency-domain attenuation equals subtracting the scaled wavelet.
bool criterion3(std::string& detail) {
    const auto t0 = Clock::now();
    Pipeline& p = pipeline();
    const auto wavelets = decompose(p.f, p.bank);
    double worst = 0.0;
    for (std::size_t band = 0; band < p.bank.num_bands(); ++band) {
        for (double delta : {1.0, 0.75, 0.5, 0.25, 0.0}) {
            const Signal freq_path = attenuate_band(p.f, p.bank, band, delta);
            Signal time_path = p.f;
            for (std::size_t i = 0; i < time_path.samples.size(); ++i)
                time_path.samples[i] -= delta * wavelets[band].samples[i];
            worst = std::max(worst, rms_diff(freq_path, time_path));
        }
    }
    const double secs = seconds_since(t0);
    detail = strf("worst RMS gap %.3g (limit 1e-9) over 25 band/depth combos; %.2f s (limit 2)",
                  worst, secs);
    return worst <= 1e-9 && secs < 2.0;
}

// 4. Backprop gradients match central finite differences.
bool criterion4(std::string& detail) {
    const auto t0 = Clock::now();
    Rng rng(404);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        BandClassifier m = init_classifier(rng.uniform_int(0, 4),
                                           static_cast<std::size_t>(rng.uniform_int(5, 40)), rng);
        for (std::size_t i = 0; i < m.input_size; ++i) {
            m.feature_mean[i] = rng.uniform(-0.5, 0.5);
            m.feature_scale[i] = rng.uniform(0.5, 2.0);
        }
        LabeledDataset data;
        const std::size_t rows = static_cast<std::size_t>(rng.uniform_int(4, 10));
        std::vector<std::size_t> batch(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            std::array<double, fingerprint_size> x{};
            for (double& v : x) v = rng.uniform(-2.0, 2.0);
            data.features.push_back(x);
            data.labels.push_back(rng.uniform_int(1, static_cast<int>(num_classes)));
            batch[r] = r;
        }

        Gradients grads;
        batch_loss_and_gradient(m, data, batch, grads);
        const std::array<std::pair<std::vector<double>*, const std::vector<double>*>, 4> layers{
            {{&m.w1, &grads.w1}, {&m.b1, &grads.b1}, {&m.w2, &grads.w2}, {&m.b2, &grads.b2}}};
        const double eps = 1e-6;
        Gradients scratch;
        for (const auto& [params, grad] : layers) {
            for (std::size_t i = 0; i < params->size(); ++i) {
                const double saved = (*params)[i];
                (*params)[i] = saved + eps;
                const double up = batch_loss_and_gradient(m, data, batch, scratch);
                (*params)[i] = saved - eps;
                const double down = batch_loss_and_gradient(m, data, batch, scratch);
                (*params)[i] = saved;
                const double fd = (up - down) / (2.0 * eps);
                const double bp = (*grad)[i];
                worst = std::max(worst,
                                 std::abs(bp - fd) / (1.0 + std::max(std::abs(bp), std::abs(fd))));
            }
        }
    }
    const double secs = seconds_since(t0);
    detail = strf("worst gradient rel err %.3g (limit 1e-4) over 20 model/batch pairs; "
                  "%.2f s (limit 10)",
                  worst, secs);
    return worst <= 1e-4 && secs < 10.0;
}

// 5. The closed-form correction undoes the system response.
bool criterion5(std::string& detail) {
    const auto t0 = Clock::now();
    Pipeline& p = pipeline();
    Rng rng(505);
    double worst = 0.0;
    std::vector<std::vector<double>> factor_sets{{0.5, 0.125, 0.0, 0.0, 0.0}};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> factors(p.bank.num_bands());
        for (double& d : factors) d = rng.uniform(0.0, 0.9);
        factor_sets.push_back(factors);
    }
    for (const auto& factors : factor_sets) {
        const Signal degraded = apply_system_response(p.f, p.bank, factors);
        worst = std::max(worst, rms_diff(corrected_signal(degraded, p.bank, factors), p.f));
    }
    const double secs = seconds_since(t0);
    detail = strf("worst recovery RMS %.3g (limit 1e-6) over 11 factor sets; %.2f s (limit 5)",
                  worst, secs);
    return worst <= 1e-6 && secs < 5.0;
}

// 6. The series correction walks monotonically toward the closed form.
bool criterion6(std::string& detail) {
    const auto t0 = Clock::now();
    Pipeline& p = pipeline();
    const std::vector<double> factors{0.5, 0.125, 0.0, 0.0, 0.0};
    const Signal exact = corrected_signal(p.f, p.bank, factors);
    bool monotone = true;
    double prev = rms_diff(p.f, exact);
    std::string path = strf("%.3g", prev);
    for (unsigned order = 1; order <= 6; ++order) {
        const double dist = rms_diff(corrected_signal_series(p.f, p.bank, factors, order), exact);
        path += strf(" > %.3g", dist);
        monotone = monotone && dist < prev;
        prev = dist;
    }
    const double secs = seconds_since(t0);
    detail = strf("distance to closed form over orders 0..6: %s; %.2f s (limit 10)", path.c_str(),
                  secs);
    return monotone && secs < 10.0;
}

// 7. The generated dataset follows the documented row counts exactly.
bool criterion7(std::string& detail) {
    const auto t0 = Clock::now();
    Pipeline& p = pipeline();
    const LabeledDataset& data = p.train_set(0);

    bool ok = data.size() == 6000;
    std::array<std::size_t, num_classes> per_class{};
    for (int label : data.labels) ++per_class[static_cast<std::size_t>(label - 1)];
    for (std::size_t c = 0; c < num_classes; ++c) ok = ok && per_class[c] == 1000;

    // class-6 rows: per donor band, 62/62/62/64 across the nonzero levels
    std::array<std::array<std::size_t, 4>, 5> donor{};
    for (std::size_t r = 0; r < data.size(); ++r) {
        if (data.labels[r] != static_cast<int>(num_classes)) continue;
        const auto b = static_cast<std::size_t>(data.source_band[r]);
        for (std::size_t c = 0; c + 1 < p.cfg.attenuation_levels.size(); ++c)
            if (data.source_level[r] == p.cfg.attenuation_levels[c]) ++donor[b][c];
    }
    for (std::size_t b = 1; b < 5; ++b) {
        ok = ok && donor[b][0] == 62 && donor[b][1] == 62 && donor[b][2] == 62 &&
             donor[b][3] == 64;
    }
    ok = ok && donor[0] == std::array<std::size_t, 4>{};

    const double secs = seconds_since(t0);
    detail = strf("rows %zu (want 6000), per-class %zu/%zu/%zu/%zu/%zu/%zu, "
                  "donor splits %zu/%zu/%zu/%zu; %.0f s",
                  data.size(), per_class[0], per_class[1], per_class[2], per_class[3],
                  per_class[4], per_class[5], donor[1][0], donor[1][1], donor[1][2], donor[1][3],
                  secs);
    return ok;
}

// 8. Classifier quality: sharp diagonals on the low bands; on the top band
// the nonzero attenuation levels are statistically indistinguishable, so the
// mass lands wherever the optimal posterior puts it.
bool criterion8(std::string& detail) {
    const auto t0 = Clock::now();
    Pipeline& p = pipeline();
    const auto& models = p.all_models();

    const auto confusion_for = [&](std::size_t band) {
        const LabeledDataset test = build_training_dataset(
            p.f, p.bank, static_cast<int>(band), p.cfg.samples_per_class,
            p.cfg.attenuation_levels, p.cfg.noise, p.cfg.conditioning, p.cfg.seeds.eval + band);
        Rng rng(p.cfg.seeds.eval ^ 0x5eedcafeULL);
        return averaged_confusion_matrix(models[band], test, p.cfg.confusion_runs, rng);
    };

    double worst_diag = 1.0;
    bool strict = true;
    for (std::size_t band : {0u, 1u, 2u}) {
        const ConfusionMatrix cm = confusion_for(band);
        for (std::size_t r = 0; r < 4; ++r) {
            double total = 0.0;
            for (double c : cm.cells[r]) total += c;
            worst_diag = std::min(worst_diag, cm.cells[r][r] / total);
            for (std::size_t c = 0; c < num_classes; ++c)
                strict = strict && (c == r || cm.cells[r][r] > cm.cells[r][c]);
        }
    }

    const ConfusionMatrix cm4 = confusion_for(4);
    double min_tail = 1.0;
    for (std::size_t r = 0; r < 4; ++r) {
        double total = 0.0;
        for (double c : cm4.cells[r]) total += c;
        min_tail = std::min(min_tail, (cm4.cells[r][4] + cm4.cells[r][5]) / total);
    }

    const double secs = seconds_since(t0);
    detail = strf("bands 0-2 rows 1-4: min diagonal %.3f (limit 0.6), strict row max %s; "
                  "band 4 rows 1-4: min 0%%+NB mass %.3f (limit 0.8, sits at the "
                  "indistinguishable-class optimum ~0.24); %.0f s",
                  worst_diag, strict ? "yes" : "no", min_tail, secs);
    return worst_diag >= 0.6 && strict && min_tail >= 0.8;
}

// 9. End-to-end restoration error.
bool criterion9(std::string& detail) {
    const auto t0 = Clock::now();
    Pipeline& p = pipeline();
    const auto& models = p.all_models();

    std::vector<double> errs;
    for (std::uint64_t k = 0; k < 10; ++k) {
        Rng rng = Rng::derived(p.cfg.seeds.correct, k);
        errs.push_back(end_to_end_eval({0.5, 0.125, 0.0, 0.0, 0.0}, p.f, models, p.bank,
                                       p.cfg.attenuation_levels, p.cfg.noise, p.cfg.conditioning,
                                       rng)
                           .rms_error);
    }
    std::sort(errs.begin(), errs.end());
    const double median = 0.5 * (errs[4] + errs[5]);

    NoiseConfig quiet = p.cfg.noise;
    quiet.jitter_max_samples = 0;
    quiet.scale_reduction_max = 0.0;
    quiet.offset_max_fraction = 0.0;
    quiet.gaussian_sigma_fraction = 0.0;
    Rng rng(p.cfg.seeds.correct);
    const double clean = end_to_end_eval({0.0, 0.0, 0.0, 0.0, 0.0}, p.f, models, p.bank,
                                         p.cfg.attenuation_levels, quiet, p.cfg.conditioning, rng)
                             .rms_error;

    const double secs = seconds_since(t0);
    detail = strf("noisy system (0.5,0.125,0,0,0): median e_RMS %.2f%% over 10 runs "
                  "(limit 10%%), worst %.2f%%; identity system, noise off: %.2f%% (limit 2%%); "
                  "%.0f s",
                  median, errs.back(), clean, secs);
    return median <= 10.0 && clean <= 2.0;
}

// 10. Fingerprint cost grows linearly: doubling the input doubles the time.
bool criterion10(std::string& detail) {
    const auto t0 = Clock::now();
    const auto time_fp = [](std::size_t n) {
        const Signal s = sinc_pulse(n, 0.5, 3.75);
        double sink = 0.0;
        sink += fingerprint(s).values[0];  // warm caches before timing
        const int reps = static_cast<int>(std::max<std::size_t>(3, 200000 / n));
        double best = 1e300;
        for (int pass = 0; pass < 5; ++pass) {
            const auto tick = Clock::now();
            for (int r = 0; r < reps; ++r) sink += fingerprint(s).values[0];
            best = std::min(best, seconds_since(tick) / reps);
        }
        if (sink == 0.123456789) std::printf("%f", sink);  // defeat dead-code elimination
        return best;
    };

    const double r3 = time_fp(2000) / time_fp(1000);
    const double r4 = time_fp(20000) / time_fp(10000);
    const double r5 = time_fp(200000) / time_fp(100000);
    const double secs = seconds_since(t0);
    detail = strf("size-doubling time ratios at 1e3/1e4/1e5: %.2f, %.2f, %.2f "
                  "(each within [1.5, 3.0]); %.1f s (limit 30)",
                  r3, r4, r5, secs);
    const auto ok = [](double r) { return r >= 1.5 && r <= 3.0; };
    return ok(r3) && ok(r4) && ok(r5) && secs < 30.0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            const int c = std::atoi(argv[++i]);
            if (c < 1 || c > 10) {
                std::fprintf(stderr, "error: criterion must be 1..10, got %s\n", argv[i]);
                return 2;
            }
            wanted.push_back(c);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return arg == "--help" ? 0 : 2;
        }
    }
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    using Criterion = bool (*)(std::string&);
    const Criterion table[10] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                 criterion6, criterion7, criterion8, criterion9, criterion10};

    bool all_ok = true;
    for (int c : wanted) {
        std::string detail;
        const bool ok = table[c - 1](detail);
        std::printf("CRITERION %d: %s - %s\n", c, ok ? "PASS" : "FAIL", detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
