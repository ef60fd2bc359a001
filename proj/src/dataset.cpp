#include "surgecast/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "surgecast/error.hpp"
#include "surgecast/rng.hpp"

namespace surgecast {

int compute_label(const FeatureSeries& series, const std::string& target_column,
                  Date reference_date, int horizon, int baseline) {
    if (horizon < 1 || baseline < 1) {
        throw ConfigError("horizon and baseline must be at least 1");
    }
    Date first_needed = reference_date - (baseline - 1);
    Date last_needed = reference_date + horizon;
    if (!series.covers(first_needed, last_needed)) {
        throw RangeError("label at " + reference_date.to_iso() + " needs target coverage " +
                         first_needed.to_iso() + " .. " + last_needed.to_iso() +
                         " but series spans " + series.start_date.to_iso() + " .. " +
                         series.end_date().to_iso());
    }
    const int col = series.column_index(target_column);
    double past = 0.0;
    for (int k = 0; k < baseline; ++k) past += series.at(reference_date - k, col);
    double next = 0.0;
    for (int k = 1; k <= horizon; ++k) next += series.at(reference_date + k, col);
    return (next / horizon) > (past / baseline) ? 1 : 0;
}

Tensor2 build_window(const FeatureSeries& series, Date reference_date, int lag) {
    if (lag < 1) {
        throw ConfigError("lag must be at least 1");
    }
    Date first = reference_date - (lag - 1);
    if (!series.covers(first, reference_date)) {
        throw RangeError("window at " + reference_date.to_iso() + " needs coverage " +
                         first.to_iso() + " .. " + reference_date.to_iso() +
                         " but series spans " + series.start_date.to_iso() + " .. " +
                         series.end_date().to_iso());
    }
    const std::size_t nf = series.feature_names.size();
    Tensor2 window(static_cast<std::size_t>(lag), nf);
    for (int t = 0; t < lag; ++t) {
        const int src = series.row_index(first + t);
        for (std::size_t c = 0; c < nf; ++c) {
            window(static_cast<std::size_t>(t), c) =
                series.rows(static_cast<std::size_t>(src), c);
        }
    }
    return window;
}

std::vector<WindowSample> build_dataset(const FeatureSeries& series,
                                        const std::string& target_column,
                                        Date reference_first, Date reference_last,
                                        int lag, int horizon, int baseline) {
    if (reference_first > reference_last) {
        throw RangeError("reference range start " + reference_first.to_iso() + " after end " +
                         reference_last.to_iso());
    }
    std::vector<WindowSample> samples;
    samples.reserve(static_cast<std::size_t>(reference_last - reference_first + 1));
    for (Date d = reference_first; d <= reference_last; ++d) {
        WindowSample s;
        s.reference_date = d;
        s.features = build_window(series, d, lag);
        s.label = compute_label(series, target_column, d, horizon, baseline);
        samples.push_back(std::move(s));
    }
    return samples;
}

DatasetSplit split_by_date(const std::vector<WindowSample>& samples,
                           Date train_first, Date train_last,
                           Date test_first, Date test_last,
                           int dev_count, std::uint64_t seed) {
    if (train_first > train_last || test_first > test_last) {
        throw ConfigError("split range start after end");
    }
    if (train_first <= test_last && test_first <= train_last) {
        throw ConfigError("train range " + train_first.to_iso() + ".." + train_last.to_iso() +
                          " overlaps test range " + test_first.to_iso() + ".." +
                          test_last.to_iso());
    }
    if (dev_count < 0) {
        throw ConfigError("dev_count must be non-negative");
    }

    DatasetSplit split;
    split.seed = seed;
    std::vector<WindowSample> train_pool;
    for (const WindowSample& s : samples) {
        if (s.reference_date >= train_first && s.reference_date <= train_last) {
            train_pool.push_back(s);
        } else if (s.reference_date >= test_first && s.reference_date <= test_last) {
            split.test.push_back(s);
        }
    }
    if (dev_count >= static_cast<int>(train_pool.size())) {
        throw ConfigError("dev_count " + std::to_string(dev_count) +
                          " not below train sample count " + std::to_string(train_pool.size()));
    }

    rng::Engine eng(seed);
    auto picked = rng::sample_without_replacement(train_pool.size(),
                                                  static_cast<std::size_t>(dev_count), eng);
    std::vector<bool> is_dev(train_pool.size(), false);
    for (std::size_t idx : picked) is_dev[idx] = true;
    for (std::size_t i = 0; i < train_pool.size(); ++i) {
        (is_dev[i] ? split.dev : split.train).push_back(std::move(train_pool[i]));
    }
    return split;
}

NormStats fit_normalizer(const std::vector<WindowSample>& train) {
    if (train.empty()) {
        throw ConfigError("cannot fit normalizer on an empty training set");
    }
    const std::size_t nf = train.front().features.cols();
    NormStats stats;
    stats.mean.assign(nf, 0.0);
    stats.stddev.assign(nf, 0.0);

    std::size_t n = 0;
    for (const WindowSample& s : train) {
        if (s.features.cols() != nf) {
            throw ShapeError("inconsistent feature counts across training samples");
        }
        for (std::size_t r = 0; r < s.features.rows(); ++r) {
            for (std::size_t c = 0; c < nf; ++c) stats.mean[c] += s.features(r, c);
        }
        n += s.features.rows();
    }
    for (std::size_t c = 0; c < nf; ++c) stats.mean[c] /= static_cast<double>(n);

    for (const WindowSample& s : train) {
        for (std::size_t r = 0; r < s.features.rows(); ++r) {
            for (std::size_t c = 0; c < nf; ++c) {
                double d = s.features(r, c) - stats.mean[c];
                stats.stddev[c] += d * d;
            }
        }
    }
    for (std::size_t c = 0; c < nf; ++c) {
        stats.stddev[c] = std::sqrt(stats.stddev[c] / static_cast<double>(n));
    }
    return stats;
}

WindowSample apply_normalizer(const NormStats& stats, const WindowSample& sample) {
    if (stats.mean.size() != sample.features.cols()) {
        throw ShapeError("normalizer has " + std::to_string(stats.mean.size()) +
                         " features but sample has " + std::to_string(sample.features.cols()));
    }
    WindowSample out = sample;
    for (std::size_t c = 0; c < stats.mean.size(); ++c) {
        const double scale = stats.stddev[c] < 1e-12 ? 0.0 : 1.0 / stats.stddev[c];
        for (std::size_t r = 0; r < out.features.rows(); ++r) {
            out.features(r, c) = (out.features(r, c) - stats.mean[c]) * scale;
        }
    }
    return out;
}

std::vector<WindowSample> apply_normalizer(const NormStats& stats,
                                           const std::vector<WindowSample>& samples) {
    std::vector<WindowSample> out;
    out.reserve(samples.size());
    for (const WindowSample& s : samples) out.push_back(apply_normalizer(stats, s));
    return out;
}

} // namespace surgecast
