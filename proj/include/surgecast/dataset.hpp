#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surgecast/date.hpp"
#include "surgecast/ingest.hpp"
#include "surgecast/tensor.hpp"

namespace surgecast {

// A labeled input window: row t holds the features of day
// reference_date - lag + 1 + t, so the last row is the reference day.
struct WindowSample {
    Date reference_date;
    Tensor2 features; // lag x F
    int label = 0;    // 1 iff next-week mean of the target exceeds past-week mean
};

// Per-feature z-score statistics, population convention (divide by N),
// computed from training samples only.
struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct DatasetSplit {
    std::vector<WindowSample> train;
    std::vector<WindowSample> dev;
    std::vector<WindowSample> test;
    std::uint64_t seed = 0;
};

// 1 iff mean(target over reference_date+1 .. reference_date+horizon)
// strictly exceeds mean(target over reference_date-baseline+1 ..
// reference_date); ties give 0. Throws RangeError on insufficient coverage.
int compute_label(const FeatureSeries& series, const std::string& target_column,
                  Date reference_date, int horizon = 7, int baseline = 7);

// The lag-day window ending on reference_date (inclusive).
Tensor2 build_window(const FeatureSeries& series, Date reference_date, int lag = 28);

// One sample per reference date in [first, last], ascending.
std::vector<WindowSample> build_dataset(const FeatureSeries& series,
                                        const std::string& target_column,
                                        Date reference_first, Date reference_last,
                                        int lag = 28, int horizon = 7, int baseline = 7);

// Date-based split: train/test by range membership, then dev_count samples
// moved out of train, chosen uniformly without replacement by the seeded
// generator. Deterministic given seed.
DatasetSplit split_by_date(const std::vector<WindowSample>& samples,
                           Date train_first, Date train_last,
                           Date test_first, Date test_last,
                           int dev_count, std::uint64_t seed);

// Statistics pooled over every day of every training window. Throws on an
// empty training set.
NormStats fit_normalizer(const std::vector<WindowSample>& train);

// Z-scores a sample with the given statistics; features whose stddev is
// below 1e-12 normalize to 0.
WindowSample apply_normalizer(const NormStats& stats, const WindowSample& sample);

std::vector<WindowSample> apply_normalizer(const NormStats& stats,
                                           const std::vector<WindowSample>& samples);

} // namespace surgecast
