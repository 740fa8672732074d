#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specorr/config.hpp"
#include "specorr/correction.hpp"
#include "specorr/io.hpp"

namespace py = pybind11;
using namespace specorr;

PYBIND11_MODULE(_specorr, m) {
    m.doc() = "cosine-band attenuation estimation and waveform correction";

    // std::out_of_range here always means a value outside its valid range,
    // never a bad subscript, so surface it as ValueError instead of the
    // default IndexError.
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const std::out_of_range& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Signal>(m, "Signal")
        .def(py::init<>())
        .def_readwrite("samples", &Signal::samples)
        .def_readwrite("t0", &Signal::t0)
        .def_readwrite("dt", &Signal::dt)
        .def("__len__", &Signal::size)
        .def("time_at", &Signal::time_at)
        .def("duration", &Signal::duration);

    py::class_<FilterBank>(m, "FilterBank")
        .def(py::init(&make_filter_bank), py::arg("nu_max") = 7.5, py::arg("max_index") = 4)
        .def_readonly("nu_max", &FilterBank::nu_max)
        .def_readonly("max_index", &FilterBank::max_index)
        .def("delta_nu", &FilterBank::delta_nu)
        .def("center", &FilterBank::center)
        .def("num_bands", &FilterBank::num_bands);

    py::class_<NoiseConfig>(m, "NoiseConfig")
        .def(py::init<>())
        .def_readwrite("decimation_factor", &NoiseConfig::decimation_factor)
        .def_readwrite("jitter_max_samples", &NoiseConfig::jitter_max_samples)
        .def_readwrite("scale_reduction_max", &NoiseConfig::scale_reduction_max)
        .def_readwrite("offset_max_fraction", &NoiseConfig::offset_max_fraction)
        .def_readwrite("gaussian_sigma_fraction", &NoiseConfig::gaussian_sigma_fraction)
        .def_readwrite("seed", &NoiseConfig::seed);

    py::class_<ConditioningConfig>(m, "ConditioningConfig")
        .def(py::init<>())
        .def_readwrite("median_window", &ConditioningConfig::median_window)
        .def_readwrite("mean_window", &ConditioningConfig::mean_window)
        .def_readwrite("pulse_threshold_fraction", &ConditioningConfig::pulse_threshold_fraction)
        .def_readwrite("baseline_fraction", &ConditioningConfig::baseline_fraction);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("momentum", &TrainConfig::momentum)
        .def_readwrite("validation_fraction", &TrainConfig::validation_fraction)
        .def_readwrite("early_stopping_patience", &TrainConfig::early_stopping_patience)
        .def_readwrite("seed", &TrainConfig::seed);

    py::class_<BandClassifier>(m, "BandClassifier")
        .def_readonly("band_index", &BandClassifier::band_index)
        .def_readonly("hidden_size", &BandClassifier::hidden_size)
        .def_readonly("validation_ce", &BandClassifier::validation_ce);

    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def(py::init<>())
        .def_readonly("features", &LabeledDataset::features)
        .def_readonly("labels", &LabeledDataset::labels)
        .def_readonly("source_band", &LabeledDataset::source_band)
        .def_readonly("source_level", &LabeledDataset::source_level)
        .def("__len__", &LabeledDataset::size);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("model", &TrainResult::model)
        .def_readonly("train_loss", &TrainResult::train_loss)
        .def_readonly("val_loss", &TrainResult::val_loss)
        .def_readonly("best_epoch", &TrainResult::best_epoch);

    py::class_<CorrectionResult>(m, "CorrectionResult")
        .def_readonly("factors", &CorrectionResult::factors)
        .def_readonly("band_probabilities", &CorrectionResult::band_probabilities)
        .def_readonly("corrected", &CorrectionResult::corrected)
        .def_readonly("factor_capped", &CorrectionResult::factor_capped);

    m.def("sinc_pulse", &sinc_pulse, py::arg("num_samples"), py::arg("center"),
          py::arg("bandwidth"));
    m.def("peak_abs", &peak_abs);
    m.def("rms_error_percent", &rms_error_percent, py::arg("observed"), py::arg("reference"));
    m.def("decompose", &decompose, py::arg("signal"), py::arg("bank"));
    m.def("attenuate_band", &attenuate_band, py::arg("signal"), py::arg("bank"), py::arg("band"),
          py::arg("depth"));
    m.def("apply_system_response", &apply_system_response, py::arg("signal"), py::arg("bank"),
          py::arg("factors"));
    m.def("corrected_signal", &corrected_signal, py::arg("original"), py::arg("bank"),
          py::arg("factors"));
    m.def("corrected_signal_series", &corrected_signal_series, py::arg("original"),
          py::arg("bank"), py::arg("factors"), py::arg("max_total_order"));
    m.def(
        "simulate_acquisition",
        [](const Signal& ideal, const NoiseConfig& cfg) {
            Rng rng(cfg.seed);
            return simulate_acquisition(ideal, cfg, rng);
        },
        py::arg("ideal"), py::arg("noise") = NoiseConfig{});
    m.def("condition", &condition, py::arg("raw"),
          py::arg("conditioning") = ConditioningConfig{});
    m.def(
        "fingerprint", [](const Signal& s) { return fingerprint(s).values; },
        py::arg("conditioned"));
    m.def("build_training_dataset", &build_training_dataset, py::arg("original"), py::arg("bank"),
          py::arg("band"), py::arg("samples_per_class"),
          py::arg("levels") = std::vector<double>{1.0, 0.75, 0.5, 0.25, 0.0},
          py::arg("noise") = NoiseConfig{}, py::arg("conditioning") = ConditioningConfig{},
          py::arg("base_seed") = 1001);
    m.def("train", &train, py::arg("data"), py::arg("band"), py::arg("hidden_size") = 20,
          py::arg("config") = TrainConfig{});
    m.def("forward", &forward, py::arg("model"), py::arg("fingerprint"));
    m.def("save_model", &save_model, py::arg("path"), py::arg("model"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def(
        "run_correction",
        [](const Signal& real_input, const Signal& original,
           const std::vector<BandClassifier>& models, const FilterBank& bank,
           const std::vector<double>& levels, const ConditioningConfig& conditioning) {
            return run_correction(real_input, original, models, bank, levels, conditioning);
        },
        py::arg("real_input"), py::arg("original"), py::arg("models"), py::arg("bank"),
        py::arg("levels") = std::vector<double>{1.0, 0.75, 0.5, 0.25, 0.0},
        py::arg("conditioning") = ConditioningConfig{});

    m.attr("fingerprint_size") = fingerprint_size;
    m.attr("num_classes") = num_classes;
}
