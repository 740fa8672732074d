#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specorr/config.hpp"
#include "specorr/correction.hpp"
#include "specorr/io.hpp"

namespace fs = std::filesystem;
using namespace specorr;

namespace {

struct Ctx {
    RunConfig cfg;
    fs::path out = "out";

    Signal waveform() const {
        return sinc_pulse(cfg.sinc.num_samples, cfg.sinc.center, cfg.sinc.bandwidth);
    }
    FilterBank bank() const { return make_filter_bank(cfg.nu_max, cfg.max_band_index); }
    fs::path dataset_path(int band) const {
        return out / ("dataset_band_" + std::to_string(band) + ".csv");
    }
    fs::path model_path(int band) const {
        return out / ("model_band_" + std::to_string(band) + ".json");
    }
};

std::vector<double> parse_factors(const std::string& text, std::size_t expected) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t stop = std::min(text.find(',', start), text.size());
        try {
            out.push_back(std::stod(text.substr(start, stop - start)));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad factor list '" + text + "'");
        }
        if (stop == text.size()) break;
        start = stop + 1;
    }
    if (out.size() != expected)
        throw std::invalid_argument("expected " + std::to_string(expected) + " factors, got " +
                                    std::to_string(out.size()));
    return out;
}

std::vector<BandClassifier> load_models(const Ctx& ctx) {
    std::vector<BandClassifier> models;
    for (std::size_t b = 0; b < ctx.bank().num_bands(); ++b) {
        const auto path = ctx.model_path(static_cast<int>(b));
        if (!fs::exists(path))
            throw std::runtime_error("missing model " + path.string() +
                                     " (run 'train --band " + std::to_string(b) + "' first)");
        models.push_back(load_model(path.string()));
    }
    return models;
}

LabeledDataset band_dataset(const Ctx& ctx, int band, std::uint64_t seed) {
    return build_training_dataset(ctx.waveform(), ctx.bank(), band, ctx.cfg.samples_per_class,
                                  ctx.cfg.attenuation_levels, ctx.cfg.noise,
                                  ctx.cfg.conditioning, seed + static_cast<std::uint64_t>(band));
}

void cmd_synth(const Ctx& ctx) {
    const Signal f = ctx.waveform();
    const Spectrum spec = dft(f);
    write_waveform_csv((ctx.out / "waveform.csv").string(), f);
    write_spectrum_csv((ctx.out / "spectrum.csv").string(), spec);
    std::printf("wrote %s and %s\n", (ctx.out / "waveform.csv").c_str(),
                (ctx.out / "spectrum.csv").c_str());
    std::printf("samples=%zu dt=%.6g peak=%.6g out_of_band_energy=%.3e\n", f.size(), f.dt,
                peak_abs(f), out_of_band_energy_fraction(spec, ctx.bank()));
}

void cmd_decompose(const Ctx& ctx) {
    const Signal f = ctx.waveform();
    const FilterBank bank = ctx.bank();
    const auto wavelets = decompose(f, bank);
    Signal sum = f;
    std::fill(sum.samples.begin(), sum.samples.end(), 0.0);
    for (std::size_t n = 0; n < wavelets.size(); ++n) {
        write_waveform_csv((ctx.out / ("wavelet_" + std::to_string(n) + ".csv")).string(),
                           wavelets[n]);
        for (std::size_t i = 0; i < sum.size(); ++i) sum.samples[i] += wavelets[n].samples[i];
        std::printf("band %zu: center=%.4g peak=%.6g\n", n, bank.center(n),
                    peak_abs(wavelets[n]));
    }
    double recon = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        recon = std::max(recon, std::abs(sum.samples[i] - f.samples[i]));
    const Spectrum spec = dft(f);
    std::printf("wavelet sum vs input: max_dev=%.3e of peak %.6g\n", recon, peak_abs(f));
    std::printf("partition of unity max deviation: %.3e\n",
                partition_of_unity_check(bank, bin_frequencies(spec)));
}

void cmd_dataset(const Ctx& ctx, int band) {
    const LabeledDataset data = band_dataset(ctx, band, ctx.cfg.seeds.dataset);
    write_dataset_csv(ctx.dataset_path(band).string(), data);
    std::array<std::size_t, num_classes> counts{};
    for (int label : data.labels) ++counts[static_cast<std::size_t>(label - 1)];
    std::printf("wrote %s (%zu rows)\n", ctx.dataset_path(band).c_str(), data.size());
    for (std::size_t c = 0; c < num_classes; ++c)
        std::printf("  class %zu (%s): %zu\n", c + 1, class_names[c], counts[c]);
}

void cmd_train(const Ctx& ctx, int band, std::size_t hidden, bool sweep) {
    LabeledDataset data;
    if (fs::exists(ctx.dataset_path(band))) {
        data = read_dataset_csv(ctx.dataset_path(band).string());
        std::printf("loaded %s (%zu rows)\n", ctx.dataset_path(band).c_str(), data.size());
    } else {
        std::printf("building dataset for band %d...\n", band);
        data = band_dataset(ctx, band, ctx.cfg.seeds.dataset);
    }
    if (sweep) {
        const SweepResult sr =
            select_hidden_size(data, band, ctx.cfg.hidden_candidates, ctx.cfg.training);
        for (const auto& e : sr.entries)
            std::printf("  hidden=%zu validation_ce=%.4f\n", e.hidden_size, e.validation_ce);
        hidden = sr.chosen;
        std::printf("selected hidden=%zu\n", hidden);
    }
    const TrainResult r = train(data, band, hidden, ctx.cfg.training);
    save_model(ctx.model_path(band).string(), r.model);
    std::printf("wrote %s (hidden=%zu best_epoch=%zu validation_ce=%.4f)\n",
                ctx.model_path(band).c_str(), r.model.hidden_size, r.best_epoch + 1,
                r.model.validation_ce);
}

void cmd_eval(const Ctx& ctx, int band) {
    const BandClassifier model = load_model(ctx.model_path(band).string());
    std::printf("building evaluation set for band %d...\n", band);
    const LabeledDataset test = band_dataset(ctx, band, ctx.cfg.seeds.eval);
    Rng rng(ctx.cfg.seeds.eval ^ 0x5eedcafe);
    const ConfusionMatrix cm =
        averaged_confusion_matrix(model, test, ctx.cfg.confusion_runs, rng);
    const auto path = ctx.out / ("confusion_band_" + std::to_string(band) + ".csv");
    write_confusion_csv(path.string(), cm);

    std::array<std::size_t, num_classes> counts{};
    for (int label : test.labels) ++counts[static_cast<std::size_t>(label - 1)];
    std::printf("wrote %s (%zu runs, %zu rows)\n%14s", path.c_str(), ctx.cfg.confusion_runs,
                test.size(), "");
    for (const char* name : class_names) std::printf("%9s", name);
    std::printf("\n");
    for (std::size_t r = 0; r < num_classes; ++r) {
        std::printf("%14s", class_names[r]);
        for (std::size_t c = 0; c < num_classes; ++c) std::printf("%9.1f", cm.cells[r][c]);
        std::printf("   diag %.3f\n", cm.cells[r][r] / static_cast<double>(counts[r]));
    }
}

void cmd_correct(const Ctx& ctx, const std::string& factor_list, std::size_t repeats) {
    const FilterBank bank = ctx.bank();
    const auto factors = parse_factors(factor_list, bank.num_bands());
    const auto models = load_models(ctx);
    const Signal f = ctx.waveform();
    std::vector<double> errors;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        Rng rng = Rng::derived(ctx.cfg.seeds.correct, rep);
        const EndToEndResult r = end_to_end_eval(factors, f, models, bank,
                                                 ctx.cfg.attenuation_levels, ctx.cfg.noise,
                                                 ctx.cfg.conditioning, rng);
        errors.push_back(r.rms_error);
        std::printf("repeat %zu: estimated factors [", rep + 1);
        for (std::size_t b = 0; b < r.correction.factors.size(); ++b)
            std::printf("%s%.4f", b ? ", " : "", r.correction.factors[b]);
        std::printf("] rms_error=%.3f%%%s\n", r.rms_error,
                    r.correction.factor_capped ? " (factor capped)" : "");
        if (rep == 0) {
            write_waveform_csv((ctx.out / "corrected.csv").string(), r.correction.corrected);
            write_waveform_csv((ctx.out / "restored.csv").string(), r.restored);
        }
    }
    std::sort(errors.begin(), errors.end());
    std::printf("median rms_error=%.3f%% over %zu repeat%s\n", errors[errors.size() / 2], repeats,
                repeats == 1 ? "" : "s");
}

void cmd_bench(const Ctx& ctx, std::size_t repeats) {
    const FilterBank bank = ctx.bank();
    Rng mrng(42);
    std::vector<BandClassifier> models;
    for (std::size_t b = 0; b < bank.num_bands(); ++b)
        models.push_back(init_classifier(static_cast<int>(b), 8, mrng));
    const std::vector<double> factors{0.5, 0.25, 0.0, 0.0, 0.0};

    std::printf("%10s %12s %8s\n", "samples", "median_ms", "ratio");
    double prev_ms = 0.0;
    std::size_t prev_n = 0;
    for (std::size_t n : {std::size_t{1000}, std::size_t{2000}, std::size_t{10000},
                          std::size_t{20000}, std::size_t{100000}, std::size_t{200000}}) {
        const Signal f = sinc_pulse(n, ctx.cfg.sinc.center, ctx.cfg.sinc.bandwidth);
        const Signal sys = apply_system_response(f, bank, factors);
        Rng arng(ctx.cfg.seeds.eval);
        const Signal acq = simulate_acquisition(sys, ctx.cfg.noise, arng);
        std::vector<double> ms;
        for (std::size_t rep = 0; rep < repeats; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const CorrectionResult r = run_correction(acq, f, models, bank,
                                                      ctx.cfg.attenuation_levels,
                                                      ctx.cfg.conditioning);
            const auto stop = std::chrono::steady_clock::now();
            if (r.corrected.size() != n) throw std::runtime_error("bench: bad output size");
            ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        }
        std::sort(ms.begin(), ms.end());
        const double med = ms[ms.size() / 2];
        if (prev_n != 0 && n == 2 * prev_n)
            std::printf("%10zu %12.3f %8.2f\n", n, med, med / prev_ms);
        else
            std::printf("%10zu %12.3f %8s\n", n, med, "-");
        prev_ms = med;
        prev_n = n;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cosine-band attenuation estimation and waveform correction pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    Ctx ctx;
    std::string out_dir = "out";
    app.add_option("-c,--config", config_path, "JSON config file (defaults used when absent)");
    app.add_option("-o,--out", out_dir, "output directory")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "write the reference waveform and its spectrum");
    auto* decompose = app.add_subcommand("decompose", "write the per-band wavelets");

    int band = 0;
    std::size_t samples_override = 0;
    auto* dataset = app.add_subcommand("dataset", "write a labeled fingerprint dataset");
    dataset->add_option("--band", band, "band index")->required();
    dataset->add_option("--samples", samples_override, "override samples per class");

    std::size_t hidden = 20;
    bool sweep = false;
    auto* train_cmd = app.add_subcommand("train", "train one band classifier");
    train_cmd->add_option("--band", band, "band index")->required();
    train_cmd->add_option("--hidden", hidden, "hidden layer size")->capture_default_str();
    train_cmd->add_flag("--sweep", sweep, "pick the hidden size by validation sweep");
    train_cmd->add_option("--samples", samples_override, "override samples per class");

    auto* eval_cmd = app.add_subcommand("eval", "confusion matrix on a fresh evaluation set");
    eval_cmd->add_option("--band", band, "band index")->required();
    eval_cmd->add_option("--samples", samples_override, "override samples per class");

    std::string factor_list;
    std::size_t repeats = 1;
    auto* correct = app.add_subcommand("correct", "estimate attenuations and correct the waveform");
    correct->add_option("--system-factors", factor_list,
                        "true per-band attenuation factors, comma separated")
        ->required();
    correct->add_option("--repeats", repeats, "independent noise repeats")->capture_default_str();

    std::size_t bench_repeats = 5;
    auto* bench = app.add_subcommand("bench", "record-processing time vs record length");
    bench->add_option("--repeats", bench_repeats, "timing repeats per size")
        ->capture_default_str();

    auto* dump = app.add_subcommand("dump-config", "print the effective config as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        ctx.cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        validate(ctx.cfg);
        if (samples_override > 0) ctx.cfg.samples_per_class = samples_override;
        ctx.out = out_dir;
        if (!dump->parsed()) fs::create_directories(ctx.out);

        if (synth->parsed()) cmd_synth(ctx);
        else if (decompose->parsed()) cmd_decompose(ctx);
        else if (dataset->parsed()) cmd_dataset(ctx, band);
        else if (train_cmd->parsed()) cmd_train(ctx, band, hidden, sweep);
        else if (eval_cmd->parsed()) cmd_eval(ctx, band);
        else if (correct->parsed()) cmd_correct(ctx, factor_list, std::max<std::size_t>(1, repeats));
        else if (bench->parsed()) cmd_bench(ctx, std::max<std::size_t>(1, bench_repeats));
        else if (dump->parsed()) std::cout << config_to_json(ctx.cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
