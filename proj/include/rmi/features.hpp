#pragma once

#include <functional>
#include <memory>
#include <string>

#include "rmi/common.hpp"

namespace rmi {

// Differentiable map y = f(x) from observable space (dim N) to feature space
// (dim K in {1,2}) with an exact Jacobian.
class FeatureFunction {
public:
    virtual ~FeatureFunction() = default;

    virtual int input_dim() const = 0;
    virtual int output_dim() const = 0;

    virtual Vector value(const Vector& x) const = 0;
    virtual Matrix jacobian(const Vector& x) const = 0;  // K x N

    // Batch APIs; X is n x N. Subclasses may override with vectorized paths.
    virtual Matrix values(const Matrix& X) const;
    // Stacked Jacobians: (n*K) x N, rows [i*K, i*K+K) hold sample i's Jacobian.
    virtual Matrix jacobians(const Matrix& X) const;
};

class LinearFeature : public FeatureFunction {
public:
    LinearFeature(Matrix weight, Vector offset)
        : W_(std::move(weight)), c_(std::move(offset)) {
        if (c_.size() != W_.rows()) throw ConfigError("linear feature offset dim mismatch");
    }
    explicit LinearFeature(Matrix weight)
        : LinearFeature(std::move(weight), Vector::Zero(weight.rows())) {}

    int input_dim() const override { return static_cast<int>(W_.cols()); }
    int output_dim() const override { return static_cast<int>(W_.rows()); }
    Vector value(const Vector& x) const override { return W_ * x + c_; }
    Matrix jacobian(const Vector&) const override { return W_; }
    Matrix values(const Matrix& X) const override {
        return (X * W_.transpose()).rowwise() + c_.transpose();
    }
    const Matrix& weight() const { return W_; }

private:
    Matrix W_;
    Vector c_;
};

enum class HandcraftedKind {
    mean_field,        // (1/N) sum_j x_j
    amp_weighted_pos,  // (1/N) sum_j j * x_j
    int_weighted_pos,  // (1/N) sum_j j * x_j^2
    normalized_int_pos,  // f_E = sum_j j x_j^2 / sum_i x_i^2
    f_var,             // ((1/M) sum (x^(1))^2, (1/M) sum (x^(2))^2)
    f_corr,            // ((1/M) sum (x^(1))^2, (1/M) sum x^(1) x^(2))
};

HandcraftedKind handcrafted_kind_from_name(const std::string& name);
std::string handcrafted_kind_name(HandcraftedKind kind);

// Closed-form physics features. Site indices j are 1-based. The particle
// kinds (f_var, f_corr) read interleaved coordinates
// (x_1^(1), x_1^(2), x_2^(1), x_2^(2), ...), so input_dim must be even.
class HandcraftedFeature : public FeatureFunction {
public:
    HandcraftedFeature(HandcraftedKind kind, int input_dim);

    int input_dim() const override { return n_; }
    int output_dim() const override { return k_; }
    Vector value(const Vector& x) const override;
    Matrix jacobian(const Vector& x) const override;
    HandcraftedKind kind() const { return kind_; }

private:
    HandcraftedKind kind_;
    int n_;
    int k_;
};

// Composition g(f(x)) of a K=1 base feature with a scalar map g; used to
// probe reparametrization invariance with explicit bijections.
class WarpedFeature : public FeatureFunction {
public:
    WarpedFeature(std::shared_ptr<const FeatureFunction> base,
                  std::function<double(double)> g, std::function<double(double)> dg)
        : base_(std::move(base)), g_(std::move(g)), dg_(std::move(dg)) {
        if (base_->output_dim() != 1)
            throw ConfigError("WarpedFeature requires a scalar base feature");
    }

    int input_dim() const override { return base_->input_dim(); }
    int output_dim() const override { return 1; }
    Vector value(const Vector& x) const override {
        Vector y = base_->value(x);
        y(0) = g_(y(0));
        return y;
    }
    Matrix jacobian(const Vector& x) const override {
        const double y = base_->value(x)(0);
        return dg_(y) * base_->jacobian(x);
    }

private:
    std::shared_ptr<const FeatureFunction> base_;
    std::function<double(double)> g_;
    std::function<double(double)> dg_;
};

// Stacks two scalar features into a K=2 feature (Eq. 6 joint evaluation).
class PairFeature : public FeatureFunction {
public:
    PairFeature(std::shared_ptr<const FeatureFunction> f1,
                std::shared_ptr<const FeatureFunction> f2)
        : f1_(std::move(f1)), f2_(std::move(f2)) {
        if (f1_->output_dim() != 1 || f2_->output_dim() != 1)
            throw ConfigError("PairFeature components must be scalar");
        if (f1_->input_dim() != f2_->input_dim())
            throw ConfigError("PairFeature components must share the input dim");
    }

    int input_dim() const override { return f1_->input_dim(); }
    int output_dim() const override { return 2; }
    Vector value(const Vector& x) const override {
        Vector y(2);
        y(0) = f1_->value(x)(0);
        y(1) = f2_->value(x)(0);
        return y;
    }
    Matrix jacobian(const Vector& x) const override {
        Matrix j(2, input_dim());
        j.row(0) = f1_->jacobian(x);
        j.row(1) = f2_->jacobian(x);
        return j;
    }

private:
    std::shared_ptr<const FeatureFunction> f1_;
    std::shared_ptr<const FeatureFunction> f2_;
};

}  // namespace rmi
