#include "surgecast/dataset_io.hpp"

#include "surgecast/error.hpp"
#include "surgecast/jsonio.hpp"

namespace surgecast {

namespace {

void emit_samples(jsonio::Emitter& e, const std::vector<WindowSample>& samples) {
    e.begin_array();
    for (const WindowSample& s : samples) {
        e.begin_object();
        e.key("date").value(s.reference_date.to_iso());
        e.key("label").value(s.label);
        e.key("rows").value(static_cast<std::int64_t>(s.features.rows()));
        e.key("cols").value(static_cast<std::int64_t>(s.features.cols()));
        e.key("features").number_array(s.features.data());
        e.end_object();
    }
    e.end_array();
}

Date parse_date_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw FormatError(std::string("dataset file lacks a string field '") + key + "'");
    }
    auto d = Date::parse(j[key].get<std::string>());
    if (!d) throw FormatError(std::string("dataset field '") + key + "' is not a valid date");
    return *d;
}

std::vector<WindowSample> parse_samples(const nlohmann::json& arr, const char* which) {
    if (!arr.is_array()) {
        throw FormatError(std::string("dataset '") + which + "' is not an array");
    }
    std::vector<WindowSample> samples;
    samples.reserve(arr.size());
    for (const auto& js : arr) {
        WindowSample s;
        s.reference_date = parse_date_field(js, "date");
        if (!js.contains("label") || !js["label"].is_number_integer()) {
            throw FormatError("dataset sample lacks an integer label");
        }
        s.label = js["label"].get<int>();
        if (s.label != 0 && s.label != 1) {
            throw FormatError("dataset sample label must be 0 or 1");
        }
        if (!js.contains("rows") || !js.contains("cols") || !js.contains("features") ||
            !js["features"].is_array()) {
            throw FormatError("dataset sample lacks rows/cols/features");
        }
        const auto rows = js["rows"].get<std::size_t>();
        const auto cols = js["cols"].get<std::size_t>();
        std::vector<double> data;
        data.reserve(js["features"].size());
        for (const auto& v : js["features"]) {
            if (!v.is_number()) throw FormatError("dataset features must be numeric");
            data.push_back(v.get<double>());
        }
        if (data.size() != rows * cols) {
            throw CorruptionError("dataset sample at " + s.reference_date.to_iso() + " holds " +
                                  std::to_string(data.size()) + " values for shape " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
        }
        s.features = Tensor2(rows, cols, std::move(data));
        if (!s.features.all_finite()) {
            throw CorruptionError("dataset sample at " + s.reference_date.to_iso() +
                                  " holds non-finite values");
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

std::vector<double> parse_number_array(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw FormatError(std::string("dataset file lacks an array field '") + key + "'");
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

std::string serialize_dataset(const DatasetArtifact& artifact) {
    jsonio::Emitter e;
    e.begin_object();
    e.key("format_version").value(DatasetArtifact::kFormatVersion);
    e.key("kind").value("surgecast-dataset");
    e.key("feature_names").begin_array();
    for (const std::string& name : artifact.feature_names) e.value(name);
    e.end_array();
    e.key("target_column").value(artifact.target_column);
    e.key("lag").value(artifact.lag);
    e.key("horizon").value(artifact.horizon);
    e.key("baseline").value(artifact.baseline);
    e.key("train_first").value(artifact.train_first.to_iso());
    e.key("train_last").value(artifact.train_last.to_iso());
    e.key("test_first").value(artifact.test_first.to_iso());
    e.key("test_last").value(artifact.test_last.to_iso());
    e.key("dev_count").value(artifact.dev_count);
    e.key("split_seed").value(artifact.split.seed);
    e.key("norm_mean").number_array(artifact.norm.mean);
    e.key("norm_stddev").number_array(artifact.norm.stddev);
    e.key("train");
    emit_samples(e, artifact.split.train);
    e.key("dev");
    emit_samples(e, artifact.split.dev);
    e.key("test");
    emit_samples(e, artifact.split.test);
    e.end_object();
    return e.str() + "\n";
}

void save_dataset(const DatasetArtifact& artifact, const std::string& path) {
    jsonio::write_file(path, serialize_dataset(artifact));
}

DatasetArtifact load_dataset(const std::string& path) {
    const nlohmann::json j = jsonio::parse_text(jsonio::read_file(path), "dataset file " + path);
    if (!j.is_object()) throw FormatError("dataset file " + path + " is not a JSON object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
        throw FormatError("dataset file " + path + " lacks a format_version");
    }
    if (j["format_version"].get<int>() != DatasetArtifact::kFormatVersion) {
        throw FormatError("dataset file " + path + " has format_version " +
                          j["format_version"].dump() + ", expected " +
                          std::to_string(DatasetArtifact::kFormatVersion));
    }
    if (!j.contains("kind") || j["kind"] != "surgecast-dataset") {
        throw FormatError("dataset file " + path + " is not a surgecast dataset");
    }

    DatasetArtifact a;
    if (!j.contains("feature_names") || !j["feature_names"].is_array()) {
        throw FormatError("dataset file lacks feature_names");
    }
    for (const auto& v : j["feature_names"]) {
        if (!v.is_string()) throw FormatError("feature_names entries must be strings");
        a.feature_names.push_back(v.get<std::string>());
    }
    if (!j.contains("target_column") || !j["target_column"].is_string()) {
        throw FormatError("dataset file lacks target_column");
    }
    a.target_column = j["target_column"].get<std::string>();
    for (auto [key, dst] : {std::pair<const char*, int*>{"lag", &a.lag},
                            {"horizon", &a.horizon},
                            {"baseline", &a.baseline},
                            {"dev_count", &a.dev_count}}) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw FormatError(std::string("dataset file lacks an integer field '") + key + "'");
        }
        *dst = j[key].get<int>();
    }
    a.train_first = parse_date_field(j, "train_first");
    a.train_last = parse_date_field(j, "train_last");
    a.test_first = parse_date_field(j, "test_first");
    a.test_last = parse_date_field(j, "test_last");
    if (!j.contains("split_seed") || !j["split_seed"].is_number_unsigned()) {
        throw FormatError("dataset file lacks an unsigned split_seed");
    }
    a.split.seed = j["split_seed"].get<std::uint64_t>();
    a.norm.mean = parse_number_array(j, "norm_mean");
    a.norm.stddev = parse_number_array(j, "norm_stddev");
    if (a.norm.mean.size() != a.feature_names.size() ||
        a.norm.stddev.size() != a.feature_names.size()) {
        throw FormatError("dataset normalization statistics do not match feature count");
    }
    if (!j.contains("train") || !j.contains("dev") || !j.contains("test")) {
        throw FormatError("dataset file lacks train/dev/test sample arrays");
    }
    a.split.train = parse_samples(j["train"], "train");
    a.split.dev = parse_samples(j["dev"], "dev");
    a.split.test = parse_samples(j["test"], "test");
    return a;
}

std::string dataset_fingerprint(const std::string& path) {
    return jsonio::hex64(jsonio::fnv1a64(jsonio::read_file(path)));
}

} // namespace surgecast
