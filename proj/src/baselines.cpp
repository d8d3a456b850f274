#include "rmi/baselines.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmi/cost.hpp"
#include "rmi/optim.hpp"
#include "rmi/rng.hpp"

namespace rmi {

// ---- Contractive autoencoder -------------------------------------------------

void AutoencoderParams::validate() const {
    encoder.validate();
    decoder.validate();
    const long n_in = encoder.layers.front().W.cols();
    const long k = encoder.layers.back().W.rows();
    if (decoder.layers.front().W.cols() != k)
        throw ConfigError("decoder input dim must equal the bottleneck");
    if (decoder.layers.back().W.rows() != n_in)
        throw ConfigError("decoder output dim must equal the encoder input dim");
    if (!(contractive_weight >= 0.0))
        throw ConfigError("contractive weight must be non-negative");
}

std::string ae_to_json(const AutoencoderParams& p) {
    p.validate();
    std::ostringstream out;
    out << "{\"format\":\"ae-1\",\"contractive_weight\":";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", p.contractive_weight);
    out << buf << ",\"encoder\":" << mlp_to_json(p.encoder)
        << ",\"decoder\":" << mlp_to_json(p.decoder) << "}";
    return out.str();
}

AutoencoderParams ae_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid autoencoder JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "ae-1")
        throw ConfigError("not an autoencoder file (missing format tag \"ae-1\")");
    AutoencoderParams p;
    if (!j.contains("encoder") || !j.contains("decoder"))
        throw ConfigError("autoencoder file must hold encoder and decoder");
    p.encoder = mlp_from_json(j["encoder"].dump());
    p.decoder = mlp_from_json(j["decoder"].dump());
    p.contractive_weight = j.value("contractive_weight", 1e-2);
    p.validate();
    return p;
}

void save_ae(const std::string& path, const AutoencoderParams& p) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write autoencoder to " + path);
    out << ae_to_json(p) << "\n";
    if (!out) throw ConfigError("failed while writing autoencoder to " + path);
}

AutoencoderParams load_ae(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read autoencoder from " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ae_from_json(ss.str());
}

namespace {

struct AeEval {
    MlpForward enc_fwd;
    MlpForward dec_fwd;
    Matrix J;  // stacked encoder Jacobians, (n*K) x N
    AeTerms terms;
};

AeEval ae_eval(const AutoencoderParams& p, const Matrix& X) {
    p.validate();
    if (X.cols() != p.encoder.layers.front().W.cols())
        throw ConfigError("batch dimensionality does not match encoder input");
    if (X.rows() < 1) throw ConfigError("need at least one sample");
    AeEval ev;
    const Matrix Xt = X.transpose();
    ev.enc_fwd = mlp_forward(p.encoder, Xt);
    ev.dec_fwd = mlp_forward(p.decoder, ev.enc_fwd.output());
    ev.J = mlp_jacobians(p.encoder, ev.enc_fwd);
    const long n = X.rows();
    ev.terms.mse = (ev.dec_fwd.output() - Xt).squaredNorm() / static_cast<double>(Xt.size());
    ev.terms.jac_frob2 = ev.J.squaredNorm() / static_cast<double>(n);
    ev.terms.loss = ev.terms.mse + p.contractive_weight * ev.terms.jac_frob2;
    return ev;
}

}  // namespace

AeTerms ae_loss(const AutoencoderParams& p, const Matrix& X) { return ae_eval(p, X).terms; }

AeTerms ae_gradient(const AutoencoderParams& p, const Matrix& X, MlpGrads& enc_grads,
                    MlpGrads& dec_grads) {
    AeEval ev = ae_eval(p, X);
    const long n = X.rows();
    const int K = static_cast<int>(ev.enc_fwd.output().rows());
    const long N = X.cols();

    enc_grads = zero_grads(p.encoder);
    dec_grads = zero_grads(p.decoder);

    // Reconstruction: d(mse)/d(x_rec) = 2 (x_rec - x) / (n N); chain into the
    // encoder through the decoder's input gradient.
    Matrix delta_dec =
        (2.0 / static_cast<double>(n * N)) * (ev.dec_fwd.output() - X.transpose());
    Matrix delta_enc = backprop_delta(p.decoder, ev.dec_fwd, std::move(delta_dec), nullptr,
                                      dec_grads, /*input_grad=*/true);

    // Contractive penalty: d(lambda <|J|^2_F>)/dJ_s = (2 lambda / n) J_s.
    if (p.contractive_weight > 0.0) {
        std::vector<Matrix> U(K, Matrix(N, n));
        const double scale = 2.0 * p.contractive_weight / static_cast<double>(n);
        for (long s = 0; s < n; ++s)
            for (int k = 0; k < K; ++k)
                U[k].col(s) = scale * ev.J.row(s * K + k).transpose();
        const std::vector<Matrix> seeds =
            jacobian_cotangent_grads(p.encoder, ev.enc_fwd, U, enc_grads);
        backprop_delta(p.encoder, ev.enc_fwd, std::move(delta_enc), &seeds, enc_grads);
    } else {
        backprop_delta(p.encoder, ev.enc_fwd, std::move(delta_enc), nullptr, enc_grads);
    }
    return ev.terms;
}

AutoencoderParams ae_init(const std::vector<int>& enc_dims, Activation enc_hidden,
                          double contractive_weight, Rng& rng) {
    if (enc_dims.size() < 2) throw ConfigError("encoder needs at least two dims");
    AutoencoderParams p;
    p.encoder = mlp_init(enc_dims, enc_hidden, rng);
    std::vector<int> dec_dims(enc_dims.rbegin(), enc_dims.rend());
    p.decoder = mlp_init(dec_dims, Activation::relu_fn, rng);
    p.contractive_weight = contractive_weight;
    p.validate();
    return p;
}

AutoencoderParams train_contractive_ae(AutoencoderParams init, const BatchProvider& batches,
                                       const TrainingConfig& cfg) {
    cfg.validate();
    init.validate();
    Optimizer enc_opt(cfg.optimizer, cfg.learning_rate);
    Optimizer dec_opt(cfg.optimizer, cfg.learning_rate);
    for (long step = 0; step < cfg.steps; ++step) {
        const Matrix X = batches(step);
        MlpGrads eg, dg;
        const AeTerms terms = ae_gradient(init, X, eg, dg);
        if (!std::isfinite(terms.loss))
            throw TrainingError("autoencoder loss diverged at step " + std::to_string(step));
        enc_opt.step(init.encoder, eg, step);
        dec_opt.step(init.decoder, dg, step);
    }
    return init;
}

// ---- Supervised probes ---------------------------------------------------------

SupervisedTask SupervisedTask::make(ProbeKind kind) {
    SupervisedTask t;
    t.kind = kind;
    if (kind == ProbeKind::wavepacket_center) {
        t.hidden = {50, 50};
        t.batch_size = 200;
        t.steps = 10000;
    } else {
        t.hidden = {100, 100};
        t.batch_size = 1500;
        t.steps = 20000;
    }
    return t;
}

double drop_probe_cost(const Matrix& preds, const Matrix& labels) {
    if (preds.cols() != 3) throw ConfigError("drop probe predictions must have 3 columns");
    if (labels.cols() != 2) throw ConfigError("drop labels must hold (dr, theta)");
    if (preds.rows() != labels.rows()) throw ConfigError("prediction/label count mismatch");
    double acc = 0.0;
    for (long i = 0; i < preds.rows(); ++i) {
        const double dr = labels(i, 0);
        const double c2 = std::cos(2.0 * labels(i, 1));
        const double s2 = std::sin(2.0 * labels(i, 1));
        const double e1 = preds(i, 0) - dr;
        const double e2 = preds(i, 1) - c2;
        const double e3 = preds(i, 2) - s2;
        acc += e1 * e1 + dr * (e2 * e2 + e3 * e3);
    }
    return acc / static_cast<double>(preds.rows());
}

namespace {

// delta of the probe loss at the output (K_out x nb), already 1/nb scaled.
Matrix probe_delta(ProbeKind kind, const Matrix& preds_t, const Matrix& labels) {
    const long nb = preds_t.cols();
    Matrix delta(preds_t.rows(), nb);
    if (kind == ProbeKind::wavepacket_center) {
        // MSE: d/dp (1/nb) sum (p - l)^2 = 2 (p - l) / nb
        delta = (2.0 / static_cast<double>(nb)) *
                (preds_t - labels.transpose());
    } else {
        for (long s = 0; s < nb; ++s) {
            const double dr = labels(s, 0);
            const double c2 = std::cos(2.0 * labels(s, 1));
            const double s2 = std::sin(2.0 * labels(s, 1));
            delta(0, s) = 2.0 * (preds_t(0, s) - dr);
            delta(1, s) = 2.0 * dr * (preds_t(1, s) - c2);
            delta(2, s) = 2.0 * dr * (preds_t(2, s) - s2);
        }
        delta /= static_cast<double>(nb);
    }
    return delta;
}

double probe_cost(ProbeKind kind, const Matrix& preds, const Matrix& labels) {
    if (kind == ProbeKind::wavepacket_center)
        return (preds - labels).squaredNorm() / static_cast<double>(preds.rows());
    return drop_probe_cost(preds, labels);
}

}  // namespace

double supervised_eval(const Matrix& features, const Matrix& labels,
                       const SupervisedTask& task, std::uint64_t seed) {
    if (features.rows() != labels.rows())
        throw ConfigError("feature/label sample count mismatch");
    if (features.rows() < 10) throw ConfigError("too few samples for a probe split");
    const long expect_labels = task.kind == ProbeKind::wavepacket_center ? 1 : 2;
    if (labels.cols() != expect_labels)
        throw ConfigError("label dimensionality does not match the probe task");

    const long n = features.rows();
    const long n_train = (n * 4) / 5;  // 80/20 split; samples are i.i.d.
    const long n_test = n - n_train;

    const int out_dim = task.kind == ProbeKind::wavepacket_center ? 1 : 3;
    std::vector<int> dims;
    dims.push_back(static_cast<int>(features.cols()));
    for (int h : task.hidden) dims.push_back(h);
    dims.push_back(out_dim);

    Rng rng(seed);
    MlpParams probe = mlp_init(dims, Activation::relu_fn, rng);
    Optimizer opt(OptimizerKind::adam, task.learning_rate);

    Matrix xb(task.batch_size, features.cols());
    Matrix lb(task.batch_size, labels.cols());
    for (long step = 0; step < task.steps; ++step) {
        Rng draw(seed, static_cast<std::uint64_t>(step) + 1);
        for (long i = 0; i < task.batch_size; ++i) {
            const long r = static_cast<long>(draw.raw() % static_cast<std::uint64_t>(n_train));
            xb.row(i) = features.row(r);
            lb.row(i) = labels.row(r);
        }
        const MlpForward fwd = mlp_forward(probe, xb.transpose());
        Matrix delta = probe_delta(task.kind, fwd.output(), lb);
        if (!delta.allFinite())
            throw TrainingError("probe loss diverged at step " + std::to_string(step));
        MlpGrads grads = zero_grads(probe);
        backprop_delta(probe, fwd, std::move(delta), nullptr, grads);
        opt.step(probe, grads, step);
    }

    const MlpForward fwd =
        mlp_forward(probe, features.bottomRows(n_test).transpose());
    return probe_cost(task.kind, fwd.output().transpose(),
                      labels.bottomRows(n_test));
}

}  // namespace rmi
