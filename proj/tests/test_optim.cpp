#include <cmath>

#include "doctest.h"
#include "rmi/optim.hpp"

using namespace rmi;

namespace {

// One-parameter model: a single 1x1 linear layer, no bias use.
MlpParams scalar_model(double theta) {
    MlpParams p;
    MlpLayer l;
    l.W = Matrix::Constant(1, 1, theta);
    l.b = Vector::Zero(1);
    l.act = Activation::linear_fn;
    p.layers = {l};
    return p;
}

MlpGrads scalar_grad(const MlpParams& p, double g) {
    MlpGrads grads = zero_grads(p);
    grads.dW[0](0, 0) = g;
    return grads;
}

double theta(const MlpParams& p) { return p.layers[0].W(0, 0); }

}  // namespace

TEST_SUITE("optim") {

TEST_CASE("names round-trip") {
    CHECK(optimizer_from_name("sgd") == OptimizerKind::sgd);
    CHECK(optimizer_from_name("rmsprop") == OptimizerKind::rmsprop);
    CHECK(optimizer_from_name("adam") == OptimizerKind::adam);
    CHECK_THROWS_AS(optimizer_from_name("sophia"), ConfigError);
    CHECK(optimizer_name(OptimizerKind::adam) == "adam");
}

TEST_CASE("sgd on C(theta) = theta^2 steps 1 -> 0.8 at lr 0.1") {
    MlpParams p = scalar_model(1.0);
    Optimizer opt(OptimizerKind::sgd, 0.1);
    opt.step(p, scalar_grad(p, 2.0 * theta(p)), 0);
    CHECK(theta(p) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("adam first step is -lr * sign(g) up to epsilon") {
    for (double g : {0.001, 5.0, -3.0}) {
        MlpParams p = scalar_model(0.5);
        Optimizer opt(OptimizerKind::adam, 0.01);
        opt.step(p, scalar_grad(p, g), 0);
        const double update = theta(p) - 0.5;
        CHECK(update == doctest::Approx(-0.01 * (g > 0 ? 1.0 : -1.0)).epsilon(1e-4));
    }
}

TEST_CASE("rmsprop first step magnitude is lr / (1 + eps/|g|sqrt(0.1))") {
    // v1 = 0.1 g^2 -> update = lr * g / (sqrt(0.1) |g| + 1e-8)
    const double g = 2.0, lr = 1e-2;
    MlpParams p = scalar_model(1.0);
    Optimizer opt(OptimizerKind::rmsprop, lr);
    opt.step(p, scalar_grad(p, g), 0);
    const double expected = lr * g / (std::sqrt(0.1) * g + 1e-8);
    CHECK(1.0 - theta(p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("rmsprop converges on the quadratic bowl") {
    // C(theta) = theta^2 from theta_0 = 1 at lr 1e-2: C(theta_500) <= 1e-4.
    MlpParams p = scalar_model(1.0);
    Optimizer opt(OptimizerKind::rmsprop, 1e-2);
    for (long t = 0; t < 500; ++t) opt.step(p, scalar_grad(p, 2.0 * theta(p)), t);
    CHECK(theta(p) * theta(p) <= 1e-4);
}

TEST_CASE("adam converges on the quadratic bowl") {
    MlpParams p = scalar_model(1.0);
    Optimizer opt(OptimizerKind::adam, 1e-2);
    for (long t = 0; t < 2000; ++t) opt.step(p, scalar_grad(p, 2.0 * theta(p)), t);
    CHECK(theta(p) * theta(p) <= 1e-4);
}

TEST_CASE("non-finite gradients abort naming the step") {
    MlpParams p = scalar_model(1.0);
    Optimizer opt(OptimizerKind::sgd, 0.1);
    bool threw = false;
    try {
        opt.step(p, scalar_grad(p, std::numeric_limits<double>::quiet_NaN()), 42);
    } catch (const TrainingError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("42") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("optimizer state shapes follow the parameter shapes") {
    // Two steps with different gradient values: state must persist (second
    // adam step differs from a fresh optimizer's second step... verified via
    // the bias-correction trajectory).
    MlpParams p = scalar_model(1.0);
    Optimizer opt(OptimizerKind::adam, 0.1);
    opt.step(p, scalar_grad(p, 1.0), 0);
    const double after1 = theta(p);
    opt.step(p, scalar_grad(p, 1.0), 1);
    const double step2 = after1 - theta(p);
    // with constant gradient, adam's bias-corrected update stays ~ lr
    CHECK(step2 == doctest::Approx(0.1).epsilon(1e-3));
}

}  // TEST_SUITE
