#include "rmi/optim.hpp"

#include <cmath>

namespace rmi {

OptimizerKind optimizer_from_name(const std::string& name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "rmsprop") return OptimizerKind::rmsprop;
    if (name == "adam") return OptimizerKind::adam;
    throw ConfigError("unknown optimizer '" + name + "' (expected sgd|rmsprop|adam)");
}

std::string optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::rmsprop: return "rmsprop";
        case OptimizerKind::adam: return "adam";
    }
    return "?";
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate)
    : kind_(kind), lr_(learning_rate) {
    if (!(lr_ > 0.0)) throw ConfigError("learning rate must be positive");
}

void Optimizer::ensure_state(const MlpParams& params) {
    if (!mW_.empty()) return;
    for (const auto& layer : params.layers) {
        mW_.emplace_back(Matrix::Zero(layer.W.rows(), layer.W.cols()));
        vW_.emplace_back(Matrix::Zero(layer.W.rows(), layer.W.cols()));
        mb_.emplace_back(Vector::Zero(layer.b.size()));
        vb_.emplace_back(Vector::Zero(layer.b.size()));
    }
}

namespace {

constexpr double kEps = 1e-8;
constexpr double kRmsDecay = 0.9;
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;

template <typename T>
void rmsprop_update(T& theta, const T& g, T& v, double lr) {
    v.array() = kRmsDecay * v.array() + (1.0 - kRmsDecay) * g.array().square();
    theta.array() -= lr * g.array() / (v.array().sqrt() + kEps);
}

template <typename T>
void adam_update(T& theta, const T& g, T& m, T& v, double lr, long t) {
    m.array() = kBeta1 * m.array() + (1.0 - kBeta1) * g.array();
    v.array() = kBeta2 * v.array() + (1.0 - kBeta2) * g.array().square();
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    theta.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + kEps);
}

}  // namespace

void Optimizer::step(MlpParams& params, const MlpGrads& grads, long step_label) {
    if (grads.dW.size() != params.layers.size())
        throw ConfigError("gradient/parameter layer count mismatch");
    for (std::size_t l = 0; l < grads.dW.size(); ++l) {
        if (!grads.dW[l].allFinite() || !grads.db[l].allFinite())
            throw TrainingError("non-finite gradient at step " + std::to_string(step_label));
    }
    ensure_state(params);
    ++t_;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Matrix& W = params.layers[l].W;
        Vector& b = params.layers[l].b;
        switch (kind_) {
            case OptimizerKind::sgd:
                W -= lr_ * grads.dW[l];
                b -= lr_ * grads.db[l];
                break;
            case OptimizerKind::rmsprop:
                rmsprop_update(W, grads.dW[l], vW_[l], lr_);
                rmsprop_update(b, grads.db[l], vb_[l], lr_);
                break;
            case OptimizerKind::adam:
                adam_update(W, grads.dW[l], mW_[l], vW_[l], lr_, t_);
                adam_update(b, grads.db[l], mb_[l], vb_[l], lr_, t_);
                break;
        }
    }
}

}  // namespace rmi
