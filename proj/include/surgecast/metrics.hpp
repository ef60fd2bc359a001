#pragma once

#include <vector>

#include "surgecast/dataset.hpp"
#include "surgecast/date.hpp"
#include "surgecast/models.hpp"

namespace surgecast {

// Fraction of samples where (prob > threshold) equals the label. A
// probability exactly at the threshold predicts 0.
double accuracy(const std::vector<double>& probs, const std::vector<int>& labels,
                double threshold = 0.5);

// Probability that a random positive outscores a random negative, ties
// counting half (rank/Mann-Whitney formulation). Requires both classes.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct EvalReport {
    double accuracy = 0.0;
    double auc = 0.0;
    long tp = 0, fp = 0, tn = 0, fn = 0;
    long n = 0;
};

// Eval-mode forward over every sample; samples must already be normalized
// with the model's statistics.
EvalReport evaluate(const Model& model, const std::vector<WindowSample>& samples);

struct TrendPoint {
    Date date;
    double probability = 0.0;
    int predicted = 0;
    int actual = 0;
};

struct TrendReport {
    std::vector<TrendPoint> points; // ascending by date
};

TrendReport trend_report(const Model& model, const std::vector<WindowSample>& samples);

} // namespace surgecast
