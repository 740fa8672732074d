#include "specorr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace specorr {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::vector<double> split_numbers(const std::string& line, const std::string& path) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t stop = std::min(line.find(',', start), line.size());
        const std::string field = line.substr(start, stop - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(field, &used));
            if (used != field.size() && field.find_first_not_of(" \t\r", used) != std::string::npos)
                throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": bad numeric field '" + field + "'");
        }
        if (stop == line.size()) break;
        start = stop + 1;
    }
    return out;
}

bool header_line(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) return false;
    return std::isdigit(static_cast<unsigned char>(line[pos])) == 0 && line[pos] != '-' &&
           line[pos] != '+' && line[pos] != '.';
}

}  // namespace

void write_waveform_csv(const std::string& path, const Signal& s) {
    auto out = open_out(path);
    out << "t,value\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << num(s.time_at(i)) << ',' << num(s.samples[i]) << '\n';
}

Signal read_waveform_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::vector<double> times;
    Signal s;
    while (std::getline(in, line)) {
        if (line.empty() || header_line(line)) continue;
        const auto fields = split_numbers(line, path);
        if (fields.size() != 2) throw std::runtime_error(path + ": expected 2 columns");
        times.push_back(fields[0]);
        s.samples.push_back(fields[1]);
    }
    if (s.samples.size() < 2) throw std::runtime_error(path + ": need at least 2 rows");
    s.t0 = times.front();
    s.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (s.dt <= 0.0) throw std::runtime_error(path + ": time column must be increasing");
    return s;
}

void write_spectrum_csv(const std::string& path, const Spectrum& spec) {
    auto out = open_out(path);
    out << "nu,re,im,mag_normalized\n";
    double top = 0.0;
    for (const auto& b : spec.bins) top = std::max(top, std::abs(b));
    const double scale = top > 0.0 ? 1.0 / top : 0.0;
    const std::size_t n = spec.size();
    const auto row = [&](std::size_t k) {
        out << num(spec.frequency_at(k)) << ',' << num(spec.bins[k].real()) << ','
            << num(spec.bins[k].imag()) << ',' << num(std::abs(spec.bins[k]) * scale) << '\n';
    };
    for (std::size_t k = n / 2 + 1; k < n; ++k) row(k);
    for (std::size_t k = 0; k <= n / 2; ++k) row(k);
}

void write_profile_csv(const std::string& path, const std::vector<double>& grid,
                       const FilterProfile& profile) {
    if (grid.size() != profile.values.size())
        throw std::invalid_argument("profile csv: grid/profile size mismatch");
    auto out = open_out(path);
    out << "nu,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << num(grid[i]) << ',' << num(profile.values[i]) << '\n';
}

void write_dataset_csv(const std::string& path, const LabeledDataset& data) {
    if (data.labels.size() != data.size())
        throw std::invalid_argument("dataset csv: feature/label count mismatch");
    auto out = open_out(path);
    for (std::size_t i = 0; i < fingerprint_size; ++i) {
        char head[8];
        std::snprintf(head, sizeof head, "p%02zu", i);
        out << head << ',';
    }
    out << "label\n";
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (double v : data.features[r]) out << num(v) << ',';
        out << data.labels[r] << '\n';
    }
}

LabeledDataset read_dataset_csv(const std::string& path) {
    auto in = open_in(path);
    LabeledDataset data;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || header_line(line)) continue;
        const auto fields = split_numbers(line, path);
        if (fields.size() != fingerprint_size + 1)
            throw std::runtime_error(path + ": expected " + std::to_string(fingerprint_size + 1) +
                                     " columns");
        std::array<double, fingerprint_size> row{};
        std::copy_n(fields.begin(), fingerprint_size, row.begin());
        const double raw_label = fields.back();
        const int label = static_cast<int>(raw_label);
        if (raw_label != label || label < 1 || label > static_cast<int>(num_classes))
            throw std::runtime_error(path + ": bad label " + std::to_string(raw_label));
        data.features.push_back(row);
        data.labels.push_back(label);
    }
    return data;
}

void write_confusion_csv(const std::string& path, const ConfusionMatrix& m) {
    auto out = open_out(path);
    out << "true\\predicted";
    for (const char* name : class_names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < num_classes; ++r) {
        out << class_names[r];
        for (std::size_t c = 0; c < num_classes; ++c) out << ',' << num(m.cells[r][c]);
        out << '\n';
    }
}

void save_model(const std::string& path, const BandClassifier& m) {
    const json j = {{"band_index", m.band_index},
                    {"input_size", m.input_size},
                    {"hidden_size", m.hidden_size},
                    {"w1", m.w1},
                    {"b1", m.b1},
                    {"w2", m.w2},
                    {"b2", m.b2},
                    {"feature_mean", m.feature_mean},
                    {"feature_scale", m.feature_scale},
                    {"z_clip", m.z_clip},
                    {"train_seed", m.train_seed},
                    {"validation_ce", m.validation_ce}};
    open_out(path) << j.dump(2) << '\n';
}

BandClassifier load_model(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": bad JSON: " + e.what());
    }
    BandClassifier m;
    try {
        m.band_index = j.at("band_index").get<int>();
        m.input_size = j.at("input_size").get<std::size_t>();
        m.hidden_size = j.at("hidden_size").get<std::size_t>();
        m.w1 = j.at("w1").get<std::vector<double>>();
        m.b1 = j.at("b1").get<std::vector<double>>();
        m.w2 = j.at("w2").get<std::vector<double>>();
        m.b2 = j.at("b2").get<std::vector<double>>();
        m.feature_mean = j.at("feature_mean").get<std::vector<double>>();
        m.feature_scale = j.at("feature_scale").get<std::vector<double>>();
        m.z_clip = j.at("z_clip").get<double>();
        m.train_seed = j.at("train_seed").get<std::uint64_t>();
        m.validation_ce = j.at("validation_ce").get<double>();
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": bad model file: " + e.what());
    }
    if (m.input_size != fingerprint_size || m.hidden_size == 0 ||
        m.w1.size() != m.hidden_size * m.input_size || m.b1.size() != m.hidden_size ||
        m.w2.size() != num_classes * m.hidden_size || m.b2.size() != num_classes ||
        m.feature_mean.size() != m.input_size || m.feature_scale.size() != m.input_size)
        throw std::runtime_error(path + ": inconsistent model dimensions");
    return m;
}

}  // namespace specorr
