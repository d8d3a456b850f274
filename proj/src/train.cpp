#include "rmi/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rmi {

void TrainingConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (batch_size < 2) throw ConfigError("batch_size must be at least 2");
    if (steps < 0) throw ConfigError("steps must be non-negative");
    if (reg_a < 0.0) throw ConfigError("reg_a must be non-negative");
    if (!(reg_tau > 0.0)) throw ConfigError("reg_tau must be positive");
    if (reg_b < 0.0) throw ConfigError("reg_b must be non-negative");
    if (!(sigma_target > 0.0)) throw ConfigError("sigma_target must be positive");
    if (grid_bins != -1 && grid_bins < 2) throw ConfigError("grid_bins must be >= 2");
    if (kernel_factor != -1.0 && !(kernel_factor > 0.0))
        throw ConfigError("kernel_factor must be positive");
}

CostWeights resolve_weights(const TrainingConfig& config, long step) {
    CostWeights w;
    w.a_eff = config.reg_a * std::exp(-static_cast<double>(step) / config.reg_tau);
    w.b_kl = config.reg_b;
    w.sigma_target = config.sigma_target;
    w.grid_bins = config.grid_bins;
    w.kernel_factor = config.kernel_factor;
    return w;
}

void TrainingHistory::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write history to " + path);
    const std::size_t axes = rows.empty() ? 1 : rows.front().grid_lo.size();
    out << "step,rmi,cost,grad_pen,kl";
    if (axes == 1) {
        out << ",grid_lo,grid_hi";
    } else {
        for (std::size_t a = 1; a <= axes; ++a) out << ",grid_lo" << a;
        for (std::size_t a = 1; a <= axes; ++a) out << ",grid_hi" << a;
    }
    out << "\n";
    char buf[64];
    const auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << ',' << buf;
    };
    for (const auto& r : rows) {
        out << r.step;
        emit(r.rmi);
        emit(r.cost);
        emit(r.grad_pen);
        emit(r.kl);
        for (double v : r.grid_lo) emit(v);
        for (double v : r.grid_hi) emit(v);
        out << "\n";
    }
    if (!out) throw ConfigError("failed while writing history to " + path);
}

TrainingResult train_feature(MlpParams& params, const BatchProvider& batches,
                             const TrainingConfig& config) {
    config.validate();
    params.validate();
    const long n_in = params.layers.front().W.cols();

    Optimizer opt(config.optimizer, config.learning_rate);
    TrainingResult res;
    res.history.rows.reserve(static_cast<std::size_t>(config.steps));
    long consecutive_degenerate = 0;

    for (long step = 0; step < config.steps; ++step) {
        Matrix X = batches(step);
        if (X.cols() != n_in)
            throw ConfigError("batch dimensionality does not match network input");
        if (X.rows() < 2) throw ConfigError("batch must hold at least two samples");

        const CostWeights w = resolve_weights(config, step);
        MlpGrads grads;
        CostTerms terms;
        try {
            terms = cost_gradient(params, X, w, grads);
        } catch (const DegenerateFeatureError& err) {
            ++res.degenerate_steps;
            if (++consecutive_degenerate > 10)
                throw TrainingError("aborted: more than 10 consecutive degenerate steps, last at step " +
                                    std::to_string(step) + " (" + err.what() + ")");
            continue;
        }
        consecutive_degenerate = 0;
        opt.step(params, grads, step);

        HistoryRow row;
        row.step = step;
        row.rmi = terms.rmi;
        row.cost = terms.cost;
        row.grad_pen = w.a_eff * terms.grad_pen;
        row.kl = terms.kl;
        for (const auto& ax : terms.grid_used.axes) {
            row.grid_lo.push_back(ax.lo);
            row.grid_hi.push_back(ax.hi);
        }
        res.history.rows.push_back(std::move(row));
        res.final_terms = terms;
    }
    return res;
}

}  // namespace rmi
