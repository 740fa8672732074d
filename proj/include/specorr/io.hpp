#pragma once

#include <string>
#include <vector>

#include "specorr/ann.hpp"
#include "specorr/signal.hpp"
#include "specorr/spectral.hpp"

namespace specorr {

// CSV "t,value"
void write_waveform_csv(const std::string& path, const Signal& s);
Signal read_waveform_csv(const std::string& path);

// CSV "nu,re,im,mag_normalized", bins ordered by ascending frequency
void write_spectrum_csv(const std::string& path, const Spectrum& spec);

// CSV "nu,value"
void write_profile_csv(const std::string& path, const std::vector<double>& grid,
                       const FilterProfile& profile);

// CSV "p00..p29,label"
void write_dataset_csv(const std::string& path, const LabeledDataset& data);
LabeledDataset read_dataset_csv(const std::string& path);

// 6x6 CSV with class-name row/column labels
void write_confusion_csv(const std::string& path, const ConfusionMatrix& m);

void save_model(const std::string& path, const BandClassifier& m);
BandClassifier load_model(const std::string& path);

}  // namespace specorr
