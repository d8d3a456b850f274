#pragma once

#include <vector>

#include "rmi/common.hpp"
#include "rmi/grid.hpp"
#include "rmi/mlp.hpp"

namespace rmi {

// Per-step resolved weights of the training cost
//   C = -(H - <ln sqrt det JJ^T>) + a_eff * <||J||_F> + b_kl * KL(P_y || N(0, sigma^2 I)).
// a_eff already includes the exponential schedule A * exp(-step/tau).
struct CostWeights {
    double a_eff = 0.0;
    double b_kl = 0.0;
    double sigma_target = 1.0;
    // Histogram policy for the auto-fitted grid (when no explicit grid is
    // passed): per-axis bins and kernel width in bin units; -1 = default for K.
    int grid_bins = -1;
    double kernel_factor = -1.0;
};

struct CostTerms {
    double cost = 0.0;
    double rmi = 0.0;
    double entropy = 0.0;
    double jacobian_term = 0.0;  // <ln sqrt det JJ^T>
    double grad_pen = 0.0;       // <||J||_F>
    double kl = 0.0;             // clamped at -0.05 for reporting
    double kl_raw = 0.0;         // as used inside `cost`
    GridSpec grid_used;          // the histogram grid the entropy was taken on
};

struct MlpGrads {
    std::vector<Matrix> dW;
    std::vector<Vector> db;
};

MlpGrads zero_grads(const MlpParams& params);

// Entropy of the batch outputs plus dH/dy for every sample, sharing one
// KDE-smeared histogram on `grid`. Y is K x n (column per sample); dH_dy
// has the same shape.
double kde_entropy_gradient(const Matrix& Y, const GridSpec& grid, Matrix& dH_dy);

// Cost of a batch. X is n x N (row per sample). When `grid` is null the
// histogram grid is derived from the batch outputs (auto bounds, 10% pad).
CostTerms total_cost(const MlpParams& params, const Matrix& X, const CostWeights& w,
                     const GridSpec* grid = nullptr);

// Cost plus the full parameter gradient, including the terms that flow
// through the Jacobian inside the RMI and the gradient penalty.
CostTerms cost_gradient(const MlpParams& params, const Matrix& X, const CostWeights& w,
                        MlpGrads& grads, const GridSpec* grid = nullptr);

// ---- Low-level pieces shared with the autoencoder's contractive penalty ----

// Accumulates into `grads` the parameter gradient of sum_s tr(U_s^T J_s),
// where J_s is the network Jacobian at sample s and U[k] (N x n) holds row k
// of the cotangent U_s per sample. Returns the activation-curvature seeds
// that backprop_delta must inject to complete the gradient: one entry per
// hidden layer (h_l x n), allocated only for layers with curvature (tanh);
// the whole vector is empty when no hidden layer has any.
std::vector<Matrix> jacobian_cotangent_grads(const MlpParams& params,
                                             const MlpForward& fwd,
                                             const std::vector<Matrix>& U,
                                             MlpGrads& grads);

// Standard reverse sweep from `delta` = dLoss/d(output pre-activation),
// K x n, adding per-hidden-layer seeds when given (empty entries skipped);
// accumulates dW/db into `grads`. When input_grad is set, also returns
// dLoss/d(input) (N x n) for chained networks; otherwise returns empty.
Matrix backprop_delta(const MlpParams& params, const MlpForward& fwd, Matrix delta,
                      const std::vector<Matrix>* seeds, MlpGrads& grads,
                      bool input_grad = false);

}  // namespace rmi
