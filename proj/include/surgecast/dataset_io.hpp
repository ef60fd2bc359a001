#pragma once

#include <string>
#include <vector>

#include "surgecast/dataset.hpp"
#include "surgecast/date.hpp"

namespace surgecast {

// Frozen, reproducible snapshot of a built dataset: the split samples
// (already normalized), the normalization statistics they were scaled
// with, and the parameters that produced them.
struct DatasetArtifact {
    static constexpr int kFormatVersion = 1;

    std::vector<std::string> feature_names;
    std::string target_column;
    int lag = 28;
    int horizon = 7;
    int baseline = 7;
    Date train_first;
    Date train_last;
    Date test_first;
    Date test_last;
    int dev_count = 10;
    DatasetSplit split;
    NormStats norm;
};

std::string serialize_dataset(const DatasetArtifact& artifact);
void save_dataset(const DatasetArtifact& artifact, const std::string& path);
DatasetArtifact load_dataset(const std::string& path);

// FNV-1a over the artifact file bytes, as stored in model metadata.
std::string dataset_fingerprint(const std::string& path);

} // namespace surgecast
