#include "surgecast/model_io.hpp"

#include "surgecast/error.hpp"
#include "surgecast/jsonio.hpp"

namespace surgecast {

std::string serialize_model(const ModelFile& file) {
    const ModelConfig& cfg = file.model.config;
    jsonio::Emitter e;
    e.begin_object();
    e.key("format_version").value(ModelFile::kFormatVersion);
    e.key("kind").value("surgecast-model");
    e.key("architecture").value(to_string(cfg.architecture));
    e.key("hidden_sizes").begin_array();
    for (int h : cfg.hidden_sizes) e.value(h);
    e.end_array();
    e.key("dropout_rate").value(cfg.dropout_rate);
    e.key("input_features").value(cfg.input_features);
    e.key("lag").value(cfg.lag);
    e.key("init_seed").value(cfg.init_seed);
    e.key("rectifier").value(cfg.rectifier);
    e.key("feature_names").begin_array();
    for (const std::string& name : file.feature_names) e.value(name);
    e.end_array();
    e.key("norm_mean").number_array(file.norm.mean);
    e.key("norm_stddev").number_array(file.norm.stddev);
    e.key("shuffle_seed").value(file.meta.shuffle_seed);
    e.key("dataset_fingerprint").value(file.meta.dataset_fingerprint);
    e.key("best_epoch").value(file.meta.history.best_epoch);
    e.key("stopped_epoch").value(file.meta.history.stopped_epoch);
    e.key("train_loss").number_array(file.meta.history.train_loss);
    e.key("dev_loss").number_array(file.meta.history.dev_loss);
    e.key("parameters").begin_array();
    for (std::size_t i = 0; i < file.model.param_names.size(); ++i) {
        const Tensor2& p = file.model.params[i];
        e.begin_object();
        e.key("name").value(file.model.param_names[i]);
        e.key("rows").value(static_cast<std::int64_t>(p.rows()));
        e.key("cols").value(static_cast<std::int64_t>(p.cols()));
        e.key("data").number_array(p.data());
        e.end_object();
    }
    e.end_array();
    e.end_object();
    return e.str() + "\n";
}

void save_model(const ModelFile& file, const std::string& path) {
    jsonio::write_file(path, serialize_model(file));
}

namespace {

std::vector<double> number_array(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw FormatError(std::string("model file lacks an array field '") + key + "'");
    }
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be numeric");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

ModelFile load_model(const std::string& path) {
    const nlohmann::json j = jsonio::parse_text(jsonio::read_file(path), "model file " + path);
    if (!j.is_object()) throw FormatError("model file " + path + " is not a JSON object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
        throw FormatError("model file " + path + " lacks a format_version");
    }
    if (j["format_version"].get<int>() != ModelFile::kFormatVersion) {
        throw FormatError("model file " + path + " has format_version " +
                          j["format_version"].dump() + ", expected " +
                          std::to_string(ModelFile::kFormatVersion));
    }
    if (!j.contains("kind") || j["kind"] != "surgecast-model") {
        throw FormatError("model file " + path + " is not a surgecast model");
    }

    ModelFile file;
    ModelConfig cfg;
    if (!j.contains("architecture") || !j["architecture"].is_string()) {
        throw FormatError("model file lacks an architecture tag");
    }
    try {
        cfg.architecture = architecture_from_string(j["architecture"].get<std::string>());
    } catch (const ConfigError& err) {
        throw FormatError(err.what());
    }
    if (!j.contains("hidden_sizes") || !j["hidden_sizes"].is_array()) {
        throw FormatError("model file lacks hidden_sizes");
    }
    for (const auto& v : j["hidden_sizes"]) {
        if (!v.is_number_integer()) throw FormatError("hidden_sizes must be integers");
        cfg.hidden_sizes.push_back(v.get<int>());
    }
    for (auto [key, dst] : {std::pair<const char*, int*>{"input_features", &cfg.input_features},
                            {"lag", &cfg.lag}}) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw FormatError(std::string("model file lacks an integer field '") + key + "'");
        }
        *dst = j[key].get<int>();
    }
    if (!j.contains("dropout_rate") || !j["dropout_rate"].is_number()) {
        throw FormatError("model file lacks dropout_rate");
    }
    cfg.dropout_rate = j["dropout_rate"].get<double>();
    if (!j.contains("init_seed") || !j["init_seed"].is_number_unsigned()) {
        throw FormatError("model file lacks an unsigned init_seed");
    }
    cfg.init_seed = j["init_seed"].get<std::uint64_t>();
    if (!j.contains("rectifier") || !j["rectifier"].is_boolean()) {
        throw FormatError("model file lacks a boolean rectifier flag");
    }
    cfg.rectifier = j["rectifier"].get<bool>();
    try {
        file.model.config = resolve_config(cfg);
    } catch (const ConfigError& err) {
        throw FormatError(err.what());
    }

    if (!j.contains("feature_names") || !j["feature_names"].is_array()) {
        throw FormatError("model file lacks feature_names");
    }
    for (const auto& v : j["feature_names"]) {
        if (!v.is_string()) throw FormatError("feature_names entries must be strings");
        file.feature_names.push_back(v.get<std::string>());
    }
    file.norm.mean = number_array(j, "norm_mean");
    file.norm.stddev = number_array(j, "norm_stddev");
    if (!j.contains("shuffle_seed") || !j["shuffle_seed"].is_number_unsigned()) {
        throw FormatError("model file lacks an unsigned shuffle_seed");
    }
    file.meta.shuffle_seed = j["shuffle_seed"].get<std::uint64_t>();
    if (!j.contains("dataset_fingerprint") || !j["dataset_fingerprint"].is_string()) {
        throw FormatError("model file lacks a dataset_fingerprint");
    }
    file.meta.dataset_fingerprint = j["dataset_fingerprint"].get<std::string>();
    for (auto [key, dst] :
         {std::pair<const char*, int*>{"best_epoch", &file.meta.history.best_epoch},
          {"stopped_epoch", &file.meta.history.stopped_epoch}}) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw FormatError(std::string("model file lacks an integer field '") + key + "'");
        }
        *dst = j[key].get<int>();
    }
    file.meta.history.train_loss = number_array(j, "train_loss");
    file.meta.history.dev_loss = number_array(j, "dev_loss");

    if (!j.contains("parameters") || !j["parameters"].is_array()) {
        throw FormatError("model file lacks a parameters array");
    }
    const auto expected = parameter_shapes(file.model.config);
    const auto& params = j["parameters"];
    if (params.size() != expected.size()) {
        throw FormatError("model file holds " + std::to_string(params.size()) +
                          " parameter tensors, expected " + std::to_string(expected.size()));
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& jp = params[i];
        if (!jp.is_object() || !jp.contains("name") || !jp["name"].is_string()) {
            throw FormatError("model parameter entry " + std::to_string(i) + " lacks a name");
        }
        const auto name = jp["name"].get<std::string>();
        if (name != expected[i].first) {
            throw FormatError("model parameter " + std::to_string(i) + " is named '" + name +
                              "', expected '" + expected[i].first + "'");
        }
        if (!jp.contains("rows") || !jp.contains("cols")) {
            throw FormatError("model parameter '" + name + "' lacks rows/cols");
        }
        const auto rows = jp["rows"].get<std::size_t>();
        const auto cols = jp["cols"].get<std::size_t>();
        if (rows != expected[i].second.first || cols != expected[i].second.second) {
            throw FormatError("model parameter '" + name + "' has shape " + std::to_string(rows) +
                              "x" + std::to_string(cols) + ", expected " +
                              std::to_string(expected[i].second.first) + "x" +
                              std::to_string(expected[i].second.second));
        }
        std::vector<double> data = number_array(jp, "data");
        if (data.size() != rows * cols) {
            throw CorruptionError("model parameter '" + name + "' holds " +
                                  std::to_string(data.size()) + " values for shape " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
        }
        Tensor2 t(rows, cols, std::move(data));
        if (!t.all_finite()) {
            throw CorruptionError("model parameter '" + name + "' holds non-finite values");
        }
        file.model.param_names.push_back(name);
        file.model.params.push_back(std::move(t));
    }
    const std::size_t f = static_cast<std::size_t>(file.model.config.input_features);
    if (file.norm.mean.size() != f || file.norm.stddev.size() != f) {
        throw FormatError("model normalization statistics do not match input_features");
    }
    if (file.feature_names.size() != f) {
        throw FormatError("model feature_names do not match input_features");
    }
    return file;
}

} // namespace surgecast
