#include "surgecast/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "surgecast/error.hpp"
#include "surgecast/nn.hpp"
#include "surgecast/rng.hpp"

namespace surgecast {

namespace {

void validate(const std::vector<WindowSample>& train_samples, const TrainConfig& cfg) {
    if (train_samples.empty()) throw ConfigError("training requires at least one sample");
    if (cfg.epochs < 1) throw ConfigError("epochs must be at least 1");
    if (cfg.batch_size < 1) throw ConfigError("batch_size must be at least 1");
    if (cfg.early_stop_patience < 1) throw ConfigError("early_stop_patience must be at least 1");
    if (cfg.learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) throw ConfigError("momentum must lie in [0, 1)");
}

double mean_eval_loss(const Model& model, const std::vector<WindowSample>& samples) {
    double total = 0.0;
    for (const WindowSample& s : samples) {
        const double p = forward(model, s.features, nn::RunMode::eval, 0);
        total += nn::bce_loss(p, s.label);
    }
    return total / static_cast<double>(samples.size());
}

} // namespace

TrainHistory train(Model& model, const std::vector<WindowSample>& train_samples,
                   const std::vector<WindowSample>& dev_samples, const TrainConfig& cfg) {
    validate(train_samples, cfg);

    nn::SgdMomentum optimizer(cfg.learning_rate, cfg.momentum);
    optimizer.init(model.params);

    TrainHistory history;
    const std::size_t n = train_samples.size();
    std::vector<std::size_t> order(n);

    std::vector<Tensor2> best_params;
    double best_dev = std::numeric_limits<double>::infinity();
    int epochs_without_improvement = 0;

    std::vector<Tensor2> batch_grads;
    batch_grads.reserve(model.params.size());
    for (const Tensor2& p : model.params) batch_grads.emplace_back(p.rows(), p.cols());

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng::Engine epoch_rng(rng::mix(cfg.shuffle_seed, static_cast<std::uint64_t>(epoch)));
        rng::shuffle(order, epoch_rng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            for (Tensor2& g : batch_grads) g.fill(0.0);
            double batch_loss = 0.0;
            for (std::size_t pos = start; pos < end; ++pos) {
                const std::size_t idx = order[pos];
                const WindowSample& s = train_samples[idx];
                const std::uint64_t sample_seed =
                    rng::mix(cfg.shuffle_seed, static_cast<std::uint64_t>(epoch),
                             static_cast<std::uint64_t>(idx));
                LossGrads lg = forward_backward(model, s.features, s.label, nn::RunMode::train,
                                                sample_seed);
                batch_loss += lg.loss;
                for (std::size_t k = 0; k < batch_grads.size(); ++k) {
                    batch_grads[k] += lg.grads[k];
                }
            }
            const double scale = 1.0 / static_cast<double>(end - start);
            if (!std::isfinite(batch_loss)) {
                throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) +
                                      ", batch " + std::to_string(start / cfg.batch_size + 1));
            }
            for (Tensor2& g : batch_grads) g *= scale;
            optimizer.step(model.params, batch_grads);
            epoch_loss += batch_loss;
        }
        history.train_loss.push_back(epoch_loss / static_cast<double>(n));
        history.stopped_epoch = epoch;

        if (dev_samples.empty()) {
            history.best_epoch = epoch;
            continue;
        }

        const double dev = mean_eval_loss(model, dev_samples);
        if (!std::isfinite(dev)) {
            throw DivergenceError("non-finite dev loss at epoch " + std::to_string(epoch));
        }
        history.dev_loss.push_back(dev);

        if (best_dev - dev >= cfg.min_improvement) {
            epochs_without_improvement = 0;
        } else {
            ++epochs_without_improvement;
        }
        if (dev < best_dev) {
            best_dev = dev;
            best_params = model.params;
            history.best_epoch = epoch;
        }
        if (epochs_without_improvement >= cfg.early_stop_patience) break;
    }

    if (!dev_samples.empty() && !best_params.empty()) {
        model.params = std::move(best_params);
    }
    return history;
}

} // namespace surgecast
