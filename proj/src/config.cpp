#include "surgecast/config.hpp"

#include <json.hpp>

#include "surgecast/error.hpp"
#include "surgecast/jsonio.hpp"

namespace surgecast {

namespace {

using nlohmann::json;

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return v.get<int>();
}

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t as_seed(const json& v, const std::string& key) {
    if (!v.is_number_unsigned()) {
        throw ConfigError("config key '" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

Date as_date(const json& v, const std::string& key) {
    auto d = Date::parse(as_string(v, key));
    if (!d) throw ConfigError("config key '" + key + "' is not a valid ISO date");
    return *d;
}

} // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
    json j;
    try {
        j = jsonio::parse_text(jsonio::read_file(path), "config file " + path);
    } catch (const DataError& err) {
        // A bad config file is a usage problem, not a data problem.
        throw ConfigError(err.what());
    }
    if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");

    for (const auto& [key, value] : j.items()) {
        if (key == "input_csv") config.input_csv = as_string(value, key);
        else if (key == "dataset_path") config.dataset_path = as_string(value, key);
        else if (key == "model_path") config.model_path = as_string(value, key);
        else if (key == "out_dir") config.out_dir = as_string(value, key);
        else if (key == "date_column") config.date_column = as_string(value, key);
        else if (key == "feature_columns") {
            if (!value.is_array()) throw ConfigError("config key 'feature_columns' must be an array");
            config.feature_columns.clear();
            for (const auto& v : value) config.feature_columns.push_back(as_string(v, key));
        } else if (key == "target_column") config.target_column = as_string(value, key);
        else if (key == "lag") config.lag = as_int(value, key);
        else if (key == "horizon") config.horizon = as_int(value, key);
        else if (key == "baseline") config.baseline = as_int(value, key);
        else if (key == "train_first") config.train_first = as_date(value, key);
        else if (key == "train_last") config.train_last = as_date(value, key);
        else if (key == "test_first") config.test_first = as_date(value, key);
        else if (key == "test_last") config.test_last = as_date(value, key);
        else if (key == "dev_count") config.dev_count = as_int(value, key);
        else if (key == "architecture") config.architecture = as_string(value, key);
        else if (key == "hidden_sizes") {
            if (!value.is_array()) throw ConfigError("config key 'hidden_sizes' must be an array");
            config.hidden_sizes.clear();
            for (const auto& v : value) config.hidden_sizes.push_back(as_int(v, key));
        } else if (key == "dropout_rate") config.dropout_rate = as_double(value, key);
        else if (key == "epochs") config.epochs = as_int(value, key);
        else if (key == "batch_size") config.batch_size = as_int(value, key);
        else if (key == "learning_rate") config.learning_rate = as_double(value, key);
        else if (key == "momentum") config.momentum = as_double(value, key);
        else if (key == "early_stop_patience") config.early_stop_patience = as_int(value, key);
        else if (key == "min_improvement") config.min_improvement = as_double(value, key);
        else if (key == "split_seed") config.split_seed = as_seed(value, key);
        else if (key == "init_seed") config.init_seed = as_seed(value, key);
        else if (key == "shuffle_seed") config.shuffle_seed = as_seed(value, key);
        else if (key == "predict_date") config.predict_date = as_string(value, key);
        else throw ConfigError("unknown config key '" + key + "' in " + path);
    }
}

} // namespace surgecast
