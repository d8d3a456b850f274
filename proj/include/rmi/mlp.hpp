#pragma once

#include <string>
#include <vector>

#include "rmi/common.hpp"
#include "rmi/features.hpp"
#include "rmi/rng.hpp"

namespace rmi {

enum class Activation { tanh_fn, relu_fn, linear_fn };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

struct MlpLayer {
    Matrix W;  // out_dim x in_dim
    Vector b;  // out_dim
    Activation act = Activation::linear_fn;
};

struct MlpParams {
    std::vector<MlpLayer> layers;

    int input_dim() const { return static_cast<int>(layers.front().W.cols()); }
    int output_dim() const { return static_cast<int>(layers.back().W.rows()); }
    long n_params() const;
    void validate() const;
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases, filled in
// a fixed order from the given generator. acts has one entry per layer and the
// final entry must be linear.
MlpParams mlp_init(const std::vector<int>& dims, const std::vector<Activation>& acts,
                   Rng& rng);

// Convenience: hidden layers share one activation, final layer linear.
MlpParams mlp_init(const std::vector<int>& dims, Activation hidden, Rng& rng);

// Batched forward pass over columns (inputs are N x n, column per sample),
// retaining activations and hidden-layer derivative masks for gradient work.
struct MlpForward {
    std::vector<Matrix> Z;  // Z[0] = input, Z[l] = activations after layer l
    std::vector<Matrix> D;  // D[l] = act'(pre-activation of layer l), hidden only

    const Matrix& output() const { return Z.back(); }
};

MlpForward mlp_forward(const MlpParams& p, const Matrix& Xt);

// Stacked per-sample Jacobians, (n*K) x N, from a completed forward pass.
Matrix mlp_jacobians(const MlpParams& p, const MlpForward& fwd);

// Cache-friendly layout used on the training path: one N x n matrix per
// output row k, whose column s holds row k of sample s's Jacobian.
std::vector<Matrix> mlp_jacobians_split(const MlpParams& p, const MlpForward& fwd);

// Lossless text round-trip (>= 17 significant digits per number).
std::string mlp_to_json(const MlpParams& p);
MlpParams mlp_from_json(const std::string& text);
void save_mlp(const std::string& path, const MlpParams& p);
MlpParams load_mlp(const std::string& path);

class MlpFeature : public FeatureFunction {
public:
    explicit MlpFeature(MlpParams params) : p_(std::move(params)) { p_.validate(); }

    int input_dim() const override { return p_.input_dim(); }
    int output_dim() const override { return p_.output_dim(); }
    Vector value(const Vector& x) const override;
    Matrix jacobian(const Vector& x) const override;
    Matrix values(const Matrix& X) const override;
    Matrix jacobians(const Matrix& X) const override;

    const MlpParams& params() const { return p_; }

private:
    MlpParams p_;
};

}  // namespace rmi
