#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surgecast/date.hpp"

namespace surgecast {

// Every knob of the pipeline with its reference default, so a bare
// `train --arch X` reproduces the standard recipe.
struct RunConfig {
    std::string input_csv;
    std::string dataset_path;
    std::string model_path;
    std::string out_dir;

    std::string date_column = "date";
    std::vector<std::string> feature_columns; // empty selects every observed column
    std::string target_column = "hospitalizedCurrently";
    int lag = 28;
    int horizon = 7;
    int baseline = 7;
    Date train_first = Date::from_ymd(2020, 4, 1);
    Date train_last = Date::from_ymd(2020, 6, 30);
    Date test_first = Date::from_ymd(2020, 7, 1);
    Date test_last = Date::from_ymd(2020, 8, 30);
    int dev_count = 10;

    std::string architecture = "lstm";
    std::vector<int> hidden_sizes; // empty keeps each architecture's default
    double dropout_rate = 0.2;

    int epochs = 200;
    int batch_size = 16;
    double learning_rate = 0.01;
    double momentum = 0.9;
    int early_stop_patience = 10;
    double min_improvement = 1e-6;

    std::uint64_t split_seed = 1;
    std::uint64_t init_seed = 1;
    std::uint64_t shuffle_seed = 1;

    std::string predict_date; // ISO; empty means the latest coverable day
};

// Overlays a JSON config file onto the defaults. Unknown keys or wrong
// types throw ConfigError.
void apply_config_file(RunConfig& config, const std::string& path);

} // namespace surgecast
