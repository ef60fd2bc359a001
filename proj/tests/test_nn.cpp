#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "surgecast/error.hpp"
#include "surgecast/nn.hpp"
#include "surgecast/rng.hpp"
#include "surgecast/tensor.hpp"

using namespace surgecast;
using nn::Activation;
using nn::RunMode;

namespace {

Tensor2 random_tensor(std::size_t r, std::size_t c, rng::Engine& eng, double scale = 2.0) {
    Tensor2 t(r, c);
    for (double& v : t.data()) v = rng::uniform_sym(eng, scale);
    return t;
}

// Central-difference dL/dx for a scalar-valued function of one tensor.
Tensor2 numeric_grad(Tensor2& x, const std::function<double()>& loss, double step = 1e-5) {
    Tensor2 g(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double save = x.data()[i];
        x.data()[i] = save + step;
        double lp = loss();
        x.data()[i] = save - step;
        double lm = loss();
        x.data()[i] = save;
        g.data()[i] = (lp - lm) / (2.0 * step);
    }
    return g;
}

double max_rel_err(const Tensor2& a, const Tensor2& n) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::fabs(a.data()[i] - n.data()[i]);
        double denom = std::max({std::fabs(a.data()[i]), std::fabs(n.data()[i]), 1e-8});
        worst = std::max(worst, d / denom);
    }
    return worst;
}

// Projection weights turning a tensor output into one scalar, so backward
// can be driven with a known upstream gradient.
double weighted_sum(const Tensor2& y, const Tensor2& weights) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y.data()[i] * weights.data()[i];
    return s;
}

} // namespace

TEST_CASE("activation fixed points") {
    Tensor2 x(1, 3);
    x(0, 0) = 0.0;
    x(0, 1) = -2.0;
    x(0, 2) = 2.0;
    Tensor2 s = nn::activate(Activation::sigmoid, x);
    CHECK(s(0, 0) == 0.5);
    CHECK(s(0, 1) == doctest::Approx(1.0 / (1.0 + std::exp(2.0))));
    Tensor2 t = nn::activate(Activation::tanh, x);
    CHECK(t(0, 0) == 0.0);
    Tensor2 r = nn::activate(Activation::relu, x);
    CHECK(r(0, 0) == 0.0);
    CHECK(r(0, 1) == 0.0);
    CHECK(r(0, 2) == 2.0);
    CHECK(nn::sigmoid(0.0) == 0.5);
}

TEST_CASE("softmax of a constant row is uniform") {
    Tensor2 x(2, 5);
    x.fill(3.7);
    Tensor2 y = nn::activate(Activation::softmax_row, x);
    for (double v : y.data()) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("softmax rows sum to 1 and shift-invariance holds") {
    rng::Engine eng(211);
    Tensor2 x = random_tensor(4, 6, eng, 5.0);
    Tensor2 y = nn::activate(Activation::softmax_row, x);
    for (std::size_t r = 0; r < 4; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < 6; ++c) {
            CHECK(y(r, c) >= 0.0);
            s += y(r, c);
        }
        CHECK(std::fabs(s - 1.0) < 1e-12);
    }
    Tensor2 shifted = x;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 6; ++c) shifted(r, c) += 17.25;
    Tensor2 y2 = nn::activate(Activation::softmax_row, shifted);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(std::fabs(y.data()[i] - y2.data()[i]) < 1e-12);
}

TEST_CASE("activation backward matches finite differences") {
    rng::Engine eng(223);
    for (Activation kind : {Activation::sigmoid, Activation::tanh, Activation::relu,
                            Activation::softmax_row}) {
        Tensor2 x = random_tensor(3, 4, eng);
        if (kind == Activation::relu) {
            // keep probe points off the kink, where the derivative is
            // undefined and central differences straddle it
            for (double& v : x.data())
                if (std::fabs(v) < 0.05) v = v < 0 ? v - 0.1 : v + 0.1;
        }
        Tensor2 up = random_tensor(3, 4, eng, 1.0);
        Tensor2 analytic = nn::activate_backward(kind, x, up);
        auto loss = [&]() { return weighted_sum(nn::activate(kind, x), up); };
        Tensor2 numeric = numeric_grad(x, loss);
        CHECK(max_rel_err(analytic, numeric) < 1e-6);
    }
}

TEST_CASE("affine identity and scalar arithmetic") {
    rng::Engine eng(227);
    Tensor2 x = random_tensor(3, 3, eng);
    Tensor2 eye(3, 3);
    for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1.0;
    Tensor2 zero(1, 3);
    Tensor2 y = nn::affine(x, eye, zero);
    CHECK(y == x);

    Tensor2 sx(1, 1), sw(1, 1), sb(1, 1);
    sx(0, 0) = 2.0;
    sw(0, 0) = 3.0;
    sb(0, 0) = 1.0;
    CHECK(nn::affine(sx, sw, sb)(0, 0) == 7.0);
}

TEST_CASE("affine rejects mismatched shapes with a diagnostic") {
    Tensor2 x(2, 3), w(4, 2), b(1, 2);
    try {
        nn::affine(x, w, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        std::string msg = e.what();
        CHECK(msg.find("2x3") != std::string::npos);
        CHECK(msg.find("4x2") != std::string::npos);
    }
}

TEST_CASE("affine backward matches finite differences") {
    rng::Engine eng(229);
    Tensor2 x = random_tensor(3, 4, eng);
    Tensor2 w = random_tensor(4, 2, eng);
    Tensor2 b = random_tensor(1, 2, eng);
    Tensor2 up = random_tensor(3, 2, eng, 1.0);

    Tensor2 y = nn::affine(x, w, b);
    auto grads = nn::affine_backward(x, w, up);
    auto loss = [&]() { return weighted_sum(nn::affine(x, w, b), up); };
    CHECK(max_rel_err(grads.dx, numeric_grad(x, loss)) < 1e-6);
    CHECK(max_rel_err(grads.dw, numeric_grad(w, loss)) < 1e-6);
    CHECK(max_rel_err(grads.db, numeric_grad(b, loss)) < 1e-6);
    (void)y;
}

TEST_CASE("dropout eval mode is the identity") {
    rng::Engine eng(233);
    Tensor2 x = random_tensor(4, 5, eng);
    auto res = nn::dropout(x, 0.2, RunMode::eval, 12345);
    CHECK(res.y == x);
    for (double m : res.mask.data()) CHECK(m == 1.0);
}

TEST_CASE("dropout rate 0 in train mode is the identity") {
    rng::Engine eng(239);
    Tensor2 x = random_tensor(4, 5, eng);
    auto res = nn::dropout(x, 0.0, RunMode::train, 12345);
    CHECK(res.y == x);
}

TEST_CASE("dropout rejects rate 1 and above") {
    Tensor2 x(2, 2);
    CHECK_THROWS_AS(nn::dropout(x, 1.0, RunMode::train, 1), ConfigError);
    CHECK_THROWS_AS(nn::dropout(x, -0.1, RunMode::train, 1), ConfigError);
}

TEST_CASE("dropout is unbiased over many seeded draws") {
    Tensor2 x(1, 10);
    x.fill(3.0);
    const int draws = 100000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        auto res = nn::dropout(x, 0.2, RunMode::train, static_cast<std::uint64_t>(i));
        for (double v : res.y.data()) sum += v;
    }
    double mean = sum / (draws * 10.0);
    CHECK(std::fabs(mean - 3.0) / 3.0 < 0.02);
}

TEST_CASE("dropout is deterministic per seed and zeroes match the mask") {
    Tensor2 x(6, 6);
    x.fill(1.0);
    auto a = nn::dropout(x, 0.4, RunMode::train, 777);
    auto b = nn::dropout(x, 0.4, RunMode::train, 777);
    CHECK(a.y == b.y);
    bool any_zero = false, any_kept = false;
    for (std::size_t i = 0; i < a.y.size(); ++i) {
        if (a.mask.data()[i] == 0.0) {
            any_zero = true;
            CHECK(a.y.data()[i] == 0.0);
        } else {
            any_kept = true;
            CHECK(a.mask.data()[i] == doctest::Approx(1.0 / 0.6));
        }
    }
    CHECK(any_zero);
    CHECK(any_kept);
}

TEST_CASE("bce values at analytic points") {
    CHECK(nn::bce_loss(0.5, 1.0) == doctest::Approx(std::log(2.0)));
    CHECK(nn::bce_loss(0.5, 0.0) == doctest::Approx(std::log(2.0)));
    CHECK(nn::bce_loss(1.0 - 1e-12, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(nn::bce_loss(1e-12, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
    // clamping keeps the endpoints finite
    CHECK(std::isfinite(nn::bce_loss(0.0, 1.0)));
    CHECK(std::isfinite(nn::bce_loss(1.0, 0.0)));
    for (double p : {0.1, 0.4, 0.9})
        for (double y : {0.0, 1.0}) CHECK(nn::bce_loss(p, y) > 0.0);
}

TEST_CASE("bce gradient matches finite differences") {
    const double step = 1e-5;
    for (double p : {0.1, 0.5, 0.9}) {
        for (double y : {0.0, 1.0}) {
            double numeric = (nn::bce_loss(p + step, y) - nn::bce_loss(p - step, y)) / (2 * step);
            double analytic = nn::bce_loss_grad(p, y);
            CHECK(std::fabs(analytic - numeric) /
                      std::max({std::fabs(analytic), std::fabs(numeric), 1e-8}) <
                  1e-6);
        }
    }
}

TEST_CASE("sgd momentum first step") {
    std::vector<Tensor2> params{Tensor2(1, 1)};
    params[0](0, 0) = 1.0;
    std::vector<Tensor2> grads{Tensor2(1, 1)};
    grads[0](0, 0) = 1.0;
    nn::SgdMomentum opt(0.01, 0.9);
    opt.init(params);
    opt.step(params, grads);
    CHECK(params[0](0, 0) == doctest::Approx(0.99));
    CHECK(opt.velocity()[0](0, 0) == doctest::Approx(-0.01));
}

TEST_CASE("zero momentum reduces to plain gradient descent") {
    rng::Engine eng(241);
    std::vector<Tensor2> params{random_tensor(2, 3, eng)};
    std::vector<Tensor2> expect = params;
    std::vector<Tensor2> grads{random_tensor(2, 3, eng)};
    nn::SgdMomentum opt(0.05, 0.0);
    opt.init(params);
    opt.step(params, grads);
    opt.step(params, grads);
    for (std::size_t i = 0; i < params[0].size(); ++i)
        CHECK(params[0].data()[i] ==
              doctest::Approx(expect[0].data()[i] - 2 * 0.05 * grads[0].data()[i]));
}

TEST_CASE("two momentum steps match the hand-evaluated recurrence") {
    std::vector<Tensor2> params{Tensor2(1, 1)};
    params[0](0, 0) = 1.0;
    std::vector<Tensor2> grads{Tensor2(1, 1)};
    grads[0](0, 0) = 0.5;
    nn::SgdMomentum opt(0.01, 0.9);
    opt.init(params);
    opt.step(params, grads);
    opt.step(params, grads);
    // v1 = -0.005, w = 0.995; v2 = 0.9*(-0.005) - 0.005 = -0.0095, w = 0.9855
    CHECK(params[0](0, 0) == doctest::Approx(0.9855).epsilon(1e-12));
}

TEST_CASE("optimizer updates are bitwise deterministic") {
    rng::Engine eng(251);
    std::vector<Tensor2> p1{random_tensor(3, 3, eng)};
    std::vector<Tensor2> p2 = p1;
    std::vector<Tensor2> g{random_tensor(3, 3, eng)};
    nn::SgdMomentum o1(0.01, 0.9), o2(0.01, 0.9);
    o1.init(p1);
    o2.init(p2);
    for (int i = 0; i < 5; ++i) {
        o1.step(p1, g);
        o2.step(p2, g);
    }
    CHECK(p1[0] == p2[0]);
}

TEST_CASE("optimizer rejects mismatched shapes") {
    std::vector<Tensor2> params{Tensor2(2, 2)};
    std::vector<Tensor2> grads{Tensor2(2, 3)};
    nn::SgdMomentum opt(0.01, 0.9);
    opt.init(params);
    CHECK_THROWS_AS(opt.step(params, grads), ShapeError);
}

TEST_CASE("grad_check reports zero on a flat loss surface") {
    Tensor2 w(2, 2);
    std::vector<Tensor2*> params{&w};
    std::vector<Tensor2> analytic{Tensor2(2, 2)};
    auto loss = []() { return 1.0; };
    CHECK(nn::grad_check(params, analytic, loss) == 0.0);
}

TEST_CASE("grad_check passes a hand-built affine+sigmoid+bce model") {
    rng::Engine eng(257);
    Tensor2 x = random_tensor(1, 4, eng);
    Tensor2 w = random_tensor(4, 1, eng);
    Tensor2 b = random_tensor(1, 1, eng);
    const double label = 1.0;

    auto loss = [&]() {
        double logit = nn::affine(x, w, b)(0, 0);
        return nn::bce_loss(nn::sigmoid(logit), label);
    };

    // analytic: dL/dlogit = p - y, then the affine backward
    double p = nn::sigmoid(nn::affine(x, w, b)(0, 0));
    Tensor2 up(1, 1);
    up(0, 0) = p - label;
    auto grads = nn::affine_backward(x, w, up);

    std::vector<Tensor2*> params{&w, &b};
    std::vector<Tensor2> analytic{grads.dw, grads.db};
    CHECK(nn::grad_check(params, analytic, loss) < 1e-6);
}

TEST_CASE("grad_check flags a wrong gradient") {
    rng::Engine eng(263);
    Tensor2 w = random_tensor(2, 2, eng);
    auto loss = [&]() {
        double s = 0.0;
        for (double v : w.data()) s += v * v;
        return s;
    };
    Tensor2 wrong(2, 2);
    for (std::size_t i = 0; i < 4; ++i) wrong.data()[i] = 2.0 * w.data()[i] * 1.5;
    std::vector<Tensor2*> params{&w};
    std::vector<Tensor2> analytic{wrong};
    CHECK(nn::grad_check(params, analytic, loss) > 0.1);
}
