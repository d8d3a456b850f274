#pragma once

#include <string>
#include <vector>

#include "rmi/common.hpp"
#include "rmi/cost.hpp"
#include "rmi/mlp.hpp"

namespace rmi {

enum class OptimizerKind { sgd, rmsprop, adam };

OptimizerKind optimizer_from_name(const std::string& name);
std::string optimizer_name(OptimizerKind kind);

// First-order optimizers over MLP parameters. Conventions:
//   sgd:     theta -= lr * g
//   rmsprop: v = 0.9 v + 0.1 g^2;             theta -= lr * g / (sqrt(v) + 1e-8)
//   adam:    m,v with beta1=0.9, beta2=0.999, bias-corrected;
//            theta -= lr * m_hat / (sqrt(v_hat) + 1e-8)
class Optimizer {
public:
    Optimizer(OptimizerKind kind, double learning_rate);

    // Applies one update in place. `step_label` is used in error messages when
    // the gradient is non-finite.
    void step(MlpParams& params, const MlpGrads& grads, long step_label);

    OptimizerKind kind() const { return kind_; }
    double learning_rate() const { return lr_; }

private:
    void ensure_state(const MlpParams& params);

    OptimizerKind kind_;
    double lr_;
    long t_ = 0;
    std::vector<Matrix> mW_, vW_;
    std::vector<Vector> mb_, vb_;
};

}  // namespace rmi
