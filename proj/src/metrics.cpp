#include "surgecast/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "surgecast/error.hpp"
#include "surgecast/nn.hpp"

namespace surgecast {

double accuracy(const std::vector<double>& probs, const std::vector<int>& labels,
                double threshold) {
    if (probs.empty()) throw MetricError("accuracy of an empty sample set is undefined");
    if (probs.size() != labels.size()) {
        throw MetricError("accuracy needs matching lengths, got " + std::to_string(probs.size()) +
                          " probabilities and " + std::to_string(labels.size()) + " labels");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const int predicted = probs[i] > threshold ? 1 : 0;
        if (predicted == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(probs.size());
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw MetricError("auc needs matching lengths, got " + std::to_string(scores.size()) +
                          " scores and " + std::to_string(labels.size()) + " labels");
    }
    std::size_t n_pos = 0;
    for (int y : labels) {
        if (y == 1) ++n_pos;
    }
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw MetricError("auc is undefined when only one class is present (" +
                          std::to_string(n_pos) + " positive of " + std::to_string(labels.size()) +
                          ")");
    }

    // Rank sum with midranks for ties; U / (n_pos * n_neg) equals the
    // pairwise tie-aware credit average.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        // 1-based ranks i+1 .. j share the midrank.
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) pos_rank_sum += midrank;
        }
        i = j;
    }
    const double n_pos_d = static_cast<double>(n_pos);
    const double u = pos_rank_sum - n_pos_d * (n_pos_d + 1.0) / 2.0;
    return u / (n_pos_d * static_cast<double>(n_neg));
}

namespace {

std::pair<std::vector<double>, std::vector<int>>
score_samples(const Model& model, const std::vector<WindowSample>& samples) {
    std::vector<double> probs;
    std::vector<int> labels;
    probs.reserve(samples.size());
    labels.reserve(samples.size());
    for (const WindowSample& s : samples) {
        probs.push_back(forward(model, s.features, nn::RunMode::eval, 0));
        labels.push_back(s.label);
    }
    return {std::move(probs), std::move(labels)};
}

} // namespace

EvalReport evaluate(const Model& model, const std::vector<WindowSample>& samples) {
    auto [probs, labels] = score_samples(model, samples);
    EvalReport report;
    report.n = static_cast<long>(samples.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const int predicted = probs[i] > 0.5 ? 1 : 0;
        if (predicted == 1 && labels[i] == 1) ++report.tp;
        if (predicted == 1 && labels[i] == 0) ++report.fp;
        if (predicted == 0 && labels[i] == 0) ++report.tn;
        if (predicted == 0 && labels[i] == 1) ++report.fn;
    }
    report.accuracy = accuracy(probs, labels);
    report.auc = auc(probs, labels);
    return report;
}

TrendReport trend_report(const Model& model, const std::vector<WindowSample>& samples) {
    std::vector<const WindowSample*> ordered;
    ordered.reserve(samples.size());
    for (const WindowSample& s : samples) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(), [](const WindowSample* a, const WindowSample* b) {
        return a->reference_date < b->reference_date;
    });

    TrendReport report;
    report.points.reserve(ordered.size());
    for (const WindowSample* s : ordered) {
        TrendPoint p;
        p.date = s->reference_date;
        p.probability = forward(model, s->features, nn::RunMode::eval, 0);
        p.predicted = p.probability > 0.5 ? 1 : 0;
        p.actual = s->label;
        report.points.push_back(p);
    }
    return report;
}

} // namespace surgecast
