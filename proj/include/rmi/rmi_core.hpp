#pragma once

#include <functional>
#include <memory>

#include "rmi/common.hpp"
#include "rmi/features.hpp"
#include "rmi/grid.hpp"
#include "rmi/rng.hpp"

namespace rmi {

// Decomposed renormalized mutual information:
//   value = H(y) - <ln sqrt det(grad f Sigma grad f^T)>.
struct RmiEstimate {
    double entropy_term = 0.0;
    double jacobian_term = 0.0;
    double value = 0.0;
};

// Noise covariance Sigma(x) generalizing the identity metric of Eq. 1.
class NoiseMetric {
public:
    static NoiseMetric identity();
    static NoiseMetric constant(Matrix sigma);
    static NoiseMetric callable(std::function<Matrix(const Vector&)> fn);

    bool is_identity() const { return kind_ == Kind::identity; }
    // Sigma at a point (undefined for identity; callers use the fast path).
    Matrix at(const Vector& x) const;
    // SPD validation at up to `max_points` rows of the batch.
    void check_spd(const Matrix& X, int max_points = 5) const;

private:
    enum class Kind { identity, constant, callable };
    Kind kind_ = Kind::identity;
    Matrix sigma_;
    std::function<Matrix(const Vector&)> fn_;
};

// <ln sqrt det(J Sigma J^T)> over the batch (nats). Throws
// DegenerateFeatureError naming the first sample whose determinant is <= 1e-300.
double jacobian_penalty(const SampleBatch& batch, const FeatureFunction& f,
                        const NoiseMetric& metric = NoiseMetric::identity());

RmiEstimate compute_rmi(const SampleBatch& batch, const FeatureFunction& f,
                        const GridSpec& grid,
                        const NoiseMetric& metric = NoiseMetric::identity());

// Auto-sized grid: [min - 0.1 range, max + 0.1 range] per feature axis with
// default bin counts (180 for K=1, 100 per axis for K=2).
RmiEstimate compute_rmi(const SampleBatch& batch, const FeatureFunction& f,
                        const NoiseMetric& metric = NoiseMetric::identity());

struct EpsilonEstimate {
    double value = 0.0;        // I_eps(x, y) + K * H_eps
    bool low_occupancy = false;  // average occupied-cell count fell below 5
};

// Monte-Carlo estimate of Eq. 5: y = f(x + eps*lambda), joint-histogram MI
// plus K*H_eps with H_eps = 0.5 ln(2 pi e eps^2). Restricted to N <= 2, K = 1.
EpsilonEstimate compute_rmi_epsilon(const SampleBatch& batch, const FeatureFunction& f,
                                    double epsilon, long n_noise_draws,
                                    std::uint64_t seed = 12345);

struct InequalityGap {
    double lhs_joint = 0.0;  // RMI of the stacked feature (y1, y2)
    double rhs = 0.0;        // RMI(y1) + RMI(y2) - I(y1, y2)
    double gap = 0.0;        // lhs_joint - rhs
};

InequalityGap inequality_gap(const SampleBatch& batch,
                             std::shared_ptr<const FeatureFunction> f1,
                             std::shared_ptr<const FeatureFunction> f2,
                             const GridSpec& joint_grid);

InequalityGap inequality_gap(const SampleBatch& batch,
                             std::shared_ptr<const FeatureFunction> f1,
                             std::shared_ptr<const FeatureFunction> f2);

struct InformationLossResult {
    double rmi = 0.0;            // compute_rmi value
    double reconstructed = 0.0;  // H(y) + [I(x, f(x+eps*l)) - I(x, f(x)+eps*l)]
};

// Appendix C identity: the difference of the input-noise and output-noise
// mutual informations reconstructs the RMI as eps -> 0.
InformationLossResult information_loss_identity(const SampleBatch& batch,
                                                const FeatureFunction& f, double epsilon,
                                                const GridSpec& grid,
                                                std::uint64_t seed = 12345);

// Top-k principal component projection (covariance eigenvectors, unit norm,
// sign fixed so each vector's largest-magnitude entry is positive).
std::shared_ptr<LinearFeature> pca_fit(const SampleBatch& batch, int k);

}  // namespace rmi
