#include "surgecast/nn.hpp"

#include <algorithm>
#include <cmath>

#include "surgecast/error.hpp"
#include "surgecast/rng.hpp"

namespace surgecast::nn {

namespace {
constexpr double kBceEps = 1e-12;
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

Tensor2 activate(Activation kind, const Tensor2& x) {
    Tensor2 y = x;
    switch (kind) {
    case Activation::sigmoid:
        for (double& v : y.data()) v = sigmoid(v);
        return y;
    case Activation::tanh:
        for (double& v : y.data()) v = std::tanh(v);
        return y;
    case Activation::relu:
        for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
        return y;
    case Activation::softmax_row:
        for (std::size_t r = 0; r < y.rows(); ++r) {
            auto row = y.row(r);
            double mx = row[0];
            for (double v : row) mx = std::max(mx, v);
            double sum = 0.0;
            for (double& v : row) {
                v = std::exp(v - mx);
                sum += v;
            }
            for (double& v : row) v /= sum;
        }
        return y;
    }
    throw ConfigError("unknown activation kind");
}

Tensor2 activate_backward(Activation kind, const Tensor2& x, const Tensor2& upstream) {
    if (!x.same_shape(upstream)) {
        throw ShapeError("activation backward shape mismatch: " + x.shape_str() + " vs " +
                         upstream.shape_str());
    }
    Tensor2 dx(x.rows(), x.cols());
    switch (kind) {
    case Activation::sigmoid:
        for (std::size_t i = 0; i < x.size(); ++i) {
            double s = sigmoid(x.data()[i]);
            dx.data()[i] = upstream.data()[i] * s * (1.0 - s);
        }
        return dx;
    case Activation::tanh:
        for (std::size_t i = 0; i < x.size(); ++i) {
            double t = std::tanh(x.data()[i]);
            dx.data()[i] = upstream.data()[i] * (1.0 - t * t);
        }
        return dx;
    case Activation::relu:
        for (std::size_t i = 0; i < x.size(); ++i) {
            dx.data()[i] = x.data()[i] > 0.0 ? upstream.data()[i] : 0.0;
        }
        return dx;
    case Activation::softmax_row: {
        Tensor2 y = activate(Activation::softmax_row, x);
        for (std::size_t r = 0; r < x.rows(); ++r) {
            double inner = dot(upstream.row(r), y.row(r));
            for (std::size_t c = 0; c < x.cols(); ++c) {
                dx(r, c) = y(r, c) * (upstream(r, c) - inner);
            }
        }
        return dx;
    }
    }
    throw ConfigError("unknown activation kind");
}

Tensor2 affine(const Tensor2& x, const Tensor2& w, const Tensor2& b) {
    if (b.rows() != 1 || b.cols() != w.cols()) {
        throw ShapeError("affine bias shape mismatch: " + b.shape_str() + " vs weights " +
                         w.shape_str());
    }
    Tensor2 y = matmul(x, w);
    for (std::size_t r = 0; r < y.rows(); ++r) {
        auto row = y.row(r);
        for (std::size_t c = 0; c < y.cols(); ++c) row[c] += b(0, c);
    }
    return y;
}

AffineGrads affine_backward(const Tensor2& x, const Tensor2& w, const Tensor2& upstream) {
    if (upstream.rows() != x.rows() || upstream.cols() != w.cols()) {
        throw ShapeError("affine backward shape mismatch: upstream " + upstream.shape_str() +
                         " vs x " + x.shape_str() + ", w " + w.shape_str());
    }
    AffineGrads g;
    g.dx = matmul_a_bt(upstream, w);
    g.dw = matmul_at_b(x, upstream);
    g.db = Tensor2(1, w.cols());
    for (std::size_t r = 0; r < upstream.rows(); ++r) {
        for (std::size_t c = 0; c < upstream.cols(); ++c) g.db(0, c) += upstream(r, c);
    }
    return g;
}

DropoutResult dropout(const Tensor2& x, double rate, RunMode mode, std::uint64_t seed) {
    if (rate < 0.0 || rate >= 1.0) {
        throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
    }
    DropoutResult out;
    if (mode == RunMode::eval || rate == 0.0) {
        out.y = x;
        out.mask = Tensor2(x.rows(), x.cols(), 1.0);
        return out;
    }
    out.mask = Tensor2(x.rows(), x.cols());
    out.y = Tensor2(x.rows(), x.cols());
    const double scale = 1.0 / (1.0 - rate);
    rng::Engine eng(seed);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double keep = rng::uniform01(eng) >= rate ? scale : 0.0;
        out.mask.data()[i] = keep;
        out.y.data()[i] = x.data()[i] * keep;
    }
    return out;
}

Tensor2 dropout_backward(const Tensor2& mask, const Tensor2& upstream) {
    if (!mask.same_shape(upstream)) {
        throw ShapeError("dropout backward shape mismatch: " + mask.shape_str() + " vs " +
                         upstream.shape_str());
    }
    Tensor2 dx(mask.rows(), mask.cols());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        dx.data()[i] = mask.data()[i] * upstream.data()[i];
    }
    return dx;
}

double bce_loss(double p, double y) {
    double q = std::clamp(p, kBceEps, 1.0 - kBceEps);
    return -(y * std::log(q) + (1.0 - y) * std::log(1.0 - q));
}

double bce_loss_grad(double p, double y) {
    double q = std::clamp(p, kBceEps, 1.0 - kBceEps);
    return (q - y) / (q * (1.0 - q));
}

void SgdMomentum::init(std::span<const Tensor2> params) {
    velocity_.clear();
    velocity_.reserve(params.size());
    for (const Tensor2& p : params) velocity_.emplace_back(p.rows(), p.cols());
}

void SgdMomentum::step(std::span<Tensor2> params, std::span<const Tensor2> grads) {
    if (params.size() != grads.size() || params.size() != velocity_.size()) {
        throw ShapeError("optimizer step: parameter/gradient/velocity counts disagree");
    }
    for (std::size_t t = 0; t < params.size(); ++t) {
        if (!params[t].same_shape(grads[t])) {
            throw ShapeError("optimizer step shape mismatch: " + params[t].shape_str() + " vs " +
                             grads[t].shape_str());
        }
        auto& w = params[t].data();
        const auto& g = grads[t].data();
        auto& v = velocity_[t].data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            v[i] = momentum_ * v[i] - learning_rate_ * g[i];
            w[i] += v[i];
        }
    }
}

double grad_check(std::span<Tensor2* const> params,
                  std::span<const Tensor2> analytic,
                  const std::function<double()>& loss,
                  double step) {
    if (params.size() != analytic.size()) {
        throw ShapeError("grad_check: parameter/gradient counts disagree");
    }
    double max_rel = 0.0;
    for (std::size_t t = 0; t < params.size(); ++t) {
        auto& values = params[t]->data();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + step;
            double up = loss();
            values[i] = saved - step;
            double down = loss();
            values[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down)) {
                throw NumericError("grad_check: non-finite loss during probing");
            }
            double numeric = (up - down) / (2.0 * step);
            double analytic_v = analytic[t].data()[i];
            double denom = std::max({std::abs(analytic_v), std::abs(numeric), 1e-8});
            max_rel = std::max(max_rel, std::abs(analytic_v - numeric) / denom);
        }
    }
    return max_rel;
}

} // namespace surgecast::nn
