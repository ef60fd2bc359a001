#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "surgecast/tensor.hpp"

namespace surgecast::nn {

enum class Activation { sigmoid, tanh, relu, softmax_row };

enum class RunMode { train, eval };

double sigmoid(double x);

// Elementwise activation; softmax_row normalizes each row with the usual
// max-subtraction.
Tensor2 activate(Activation kind, const Tensor2& x);

// Given the forward input x and the upstream gradient dL/dy, returns dL/dx.
Tensor2 activate_backward(Activation kind, const Tensor2& x, const Tensor2& upstream);

// y = x*W + b, b broadcast over rows. b must be 1 x W.cols().
Tensor2 affine(const Tensor2& x, const Tensor2& w, const Tensor2& b);

struct AffineGrads {
    Tensor2 dx;
    Tensor2 dw;
    Tensor2 db;
};

AffineGrads affine_backward(const Tensor2& x, const Tensor2& w, const Tensor2& upstream);

struct DropoutResult {
    Tensor2 y;
    // Entries are 0 or 1/(1-rate); eval mode yields all ones. Backward is
    // an elementwise product with this mask.
    Tensor2 mask;
};

// Inverted dropout: train mode keeps each entry with probability 1-rate and
// scales survivors by 1/(1-rate); eval mode is the identity. Deterministic
// given seed.
DropoutResult dropout(const Tensor2& x, double rate, RunMode mode, std::uint64_t seed);

Tensor2 dropout_backward(const Tensor2& mask, const Tensor2& upstream);

// Binary cross-entropy on a single probability; p is clamped to
// [1e-12, 1-1e-12] before the log.
double bce_loss(double p, double y);
double bce_loss_grad(double p, double y);

// Heavy-ball momentum: v <- mu*v - eta*g; w <- w + v.
class SgdMomentum {
public:
    SgdMomentum(double learning_rate, double momentum)
        : learning_rate_(learning_rate), momentum_(momentum) {}

    void init(std::span<const Tensor2> params);
    void step(std::span<Tensor2> params, std::span<const Tensor2> grads);

    double learning_rate() const { return learning_rate_; }
    double momentum() const { return momentum_; }
    const std::vector<Tensor2>& velocity() const { return velocity_; }

private:
    double learning_rate_;
    double momentum_;
    std::vector<Tensor2> velocity_;
};

// Central-difference check of analytic gradients. `loss` must re-evaluate
// the scalar loss from the current parameter values; `params` are mutated
// in place during probing and restored afterwards. Returns the maximum
// |a-n| / max(|a|,|n|,1e-8) over every parameter entry.
double grad_check(std::span<Tensor2* const> params,
                  std::span<const Tensor2> analytic,
                  const std::function<double()>& loss,
                  double step = 1e-5);

} // namespace surgecast::nn
