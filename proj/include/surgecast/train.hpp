#pragma once

#include <cstdint>
#include <vector>

#include "surgecast/dataset.hpp"
#include "surgecast/models.hpp"

namespace surgecast {

struct TrainConfig {
    int epochs = 200;
    int batch_size = 16;
    double learning_rate = 0.01;
    double momentum = 0.9;
    int early_stop_patience = 10;
    double min_improvement = 1e-6;
    std::uint64_t shuffle_seed = 1;
};

struct TrainHistory {
    std::vector<double> train_loss; // mean per-sample loss, one entry per epoch run
    std::vector<double> dev_loss;   // empty when no dev samples were given
    int best_epoch = 0;             // 1-based; epoch whose weights the model ends with
    int stopped_epoch = 0;          // 1-based; last epoch actually run
};

// Minibatch SGD with momentum over shuffled epochs. Dev loss is measured
// in eval mode after each epoch; when it fails to improve by at least
// min_improvement for early_stop_patience consecutive epochs, training
// stops and the best-epoch weights are restored. With no dev samples the
// loop always runs every epoch and keeps the final weights. Deterministic
// given the model's initial state and cfg.shuffle_seed.
TrainHistory train(Model& model, const std::vector<WindowSample>& train_samples,
                   const std::vector<WindowSample>& dev_samples, const TrainConfig& cfg);

} // namespace surgecast
