#pragma once

#include <string>

#include "surgecast/dataset.hpp"
#include "surgecast/models.hpp"
#include "surgecast/train.hpp"

namespace surgecast {

struct ModelMetadata {
    std::uint64_t shuffle_seed = 0;
    std::string dataset_fingerprint; // 16 hex digits, empty when untrained
    TrainHistory history;
};

struct ModelFile {
    static constexpr int kFormatVersion = 1;

    Model model;
    NormStats norm;
    std::vector<std::string> feature_names; // column order the model was trained on
    ModelMetadata meta;
};

std::string serialize_model(const ModelFile& file);
void save_model(const ModelFile& file, const std::string& path);
ModelFile load_model(const std::string& path);

} // namespace surgecast
