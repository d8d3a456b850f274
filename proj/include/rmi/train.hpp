#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rmi/common.hpp"
#include "rmi/cost.hpp"
#include "rmi/mlp.hpp"
#include "rmi/optim.hpp"

namespace rmi {

// Produces a fresh batch_size x N batch of observables for the given step.
using BatchProvider = std::function<Matrix(long step)>;

struct TrainingConfig {
    OptimizerKind optimizer = OptimizerKind::adam;
    double learning_rate = 5e-3;
    long batch_size = 100;
    long steps = 1000;
    double reg_a = 0.0;        // gradient-penalty amplitude A
    double reg_tau = 1.0;      // decay constant of A exp(-step/tau)
    double reg_b = 0.0;        // KL weight B
    double sigma_target = 1.0; // sigma of the Gaussian the outputs are pulled to
    int grid_bins = -1;        // per-axis histogram bins; -1 = default for K
    double kernel_factor = -1; // kernel width in bin units; -1 = default for K

    void validate() const;
};

// Cost weights in effect at a given (0-based) step: A exp(-step/tau), B, sigma.
CostWeights resolve_weights(const TrainingConfig& config, long step);

struct HistoryRow {
    long step = 0;
    double rmi = 0.0;
    double cost = 0.0;
    double grad_pen = 0.0;  // weighted term A exp(-step/tau) <||grad f||>
    double kl = 0.0;
    std::vector<double> grid_lo;  // per output axis
    std::vector<double> grid_hi;
};

struct TrainingHistory {
    std::vector<HistoryRow> rows;

    // Header: step,rmi,cost,grad_pen,kl,grid_lo,grid_hi with the grid columns
    // repeated per axis (grid_lo1,... when K = 2).
    void save_csv(const std::string& path) const;
};

struct TrainingResult {
    TrainingHistory history;
    CostTerms final_terms;       // terms of the last completed step
    long degenerate_steps = 0;   // total skipped steps
};

// Gradient-trains `params` in place, drawing a fresh batch every step. The
// histogram grid is re-fit to each batch's outputs. Steps whose batch makes
// the feature degenerate are skipped; more than 10 in a row abort training.
TrainingResult train_feature(MlpParams& params, const BatchProvider& batches,
                             const TrainingConfig& config);

}  // namespace rmi
