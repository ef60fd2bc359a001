#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "surgecast/nn.hpp"
#include "surgecast/tensor.hpp"

namespace surgecast {

enum class Architecture { lstm, stacked_lstm, bilstm, seq2seq_attention };

Architecture architecture_from_string(const std::string& name);
std::string to_string(Architecture arch);

// Per-architecture layer widths: 64 / 128-64-32 / 64 per direction /
// 64 encoder + 64 decoder.
std::vector<int> default_hidden_sizes(Architecture arch);

struct ModelConfig {
    Architecture architecture = Architecture::lstm;
    std::vector<int> hidden_sizes; // empty selects the architecture default
    double dropout_rate = 0.2;
    int input_features = 0;
    int lag = 28;
    std::uint64_t init_seed = 1;
    // Identity instead of relu after stacked/encoder layers. Exists so the
    // plain three-layer composition can be gradient-checked in isolation.
    bool rectifier = true;
};

// Fills hidden_sizes defaults and validates arity/ranges. Throws ConfigError.
ModelConfig resolve_config(ModelConfig config);

// Parameter names and shapes implied by a config, in canonical order.
// Gate packing within lstm tensors is [input | forget | candidate | output].
std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>>
parameter_shapes(const ModelConfig& config);

struct Model {
    ModelConfig config;
    std::vector<std::string> param_names;
    std::vector<Tensor2> params;

    const Tensor2& param(const std::string& name) const;
    Tensor2& param(const std::string& name);
};

// Weights drawn uniform in +-sqrt(6/(fan_in+fan_out)); lstm forget-gate
// bias slices start at 1.0, every other bias at 0. Deterministic given
// config.init_seed.
Model init_model(const ModelConfig& config);

// One lstm step. x is length-F, h and c are length-H; wx is Fx4H, wh is
// Hx4H, b is 1x4H. Returns (h', c').
std::pair<std::vector<double>, std::vector<double>>
lstm_cell_forward(const Tensor2& wx, const Tensor2& wh, const Tensor2& b,
                  std::span<const double> x, std::span<const double> h,
                  std::span<const double> c);

// Unrolls the cell over the window rows from zero initial state; returns
// the lag x H matrix of hidden states.
Tensor2 lstm_layer_forward(const Tensor2& window, const Tensor2& wx, const Tensor2& wh,
                           const Tensor2& b);

struct AttentionResult {
    std::vector<double> context;
    std::vector<double> weights;
};

// Dot-product attention: weights = softmax over <decoder_state,
// encoder_state_t>; context is the weighted average of encoder states.
AttentionResult attention(std::span<const double> decoder_state, const Tensor2& encoder_states);

// Surge probability in (0,1) for a lag x F window.
double forward(const Model& model, const Tensor2& window, nn::RunMode mode, std::uint64_t seed);

struct LossGrads {
    double prob = 0.0;
    double loss = 0.0;
    std::vector<Tensor2> grads; // aligned with model.params
};

// Forward plus hand-derived backward of the binary cross-entropy loss
// against `label`, through the full architecture (BPTT over the window).
LossGrads forward_backward(const Model& model, const Tensor2& window, double label,
                           nn::RunMode mode, std::uint64_t seed);

// Central-difference verification of forward_backward over every parameter
// entry (eval mode). Returns the max relative error.
double model_grad_check(Model& model, const Tensor2& window, double label, double step = 1e-5);

} // namespace surgecast
