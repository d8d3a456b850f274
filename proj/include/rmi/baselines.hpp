#pragma once

#include <cstdint>
#include <string>

#include "rmi/common.hpp"
#include "rmi/mlp.hpp"
#include "rmi/train.hpp"

namespace rmi {

// ---- Contractive autoencoder -------------------------------------------------

struct AutoencoderParams {
    MlpParams encoder;
    MlpParams decoder;
    double contractive_weight = 1e-2;  // lambda_c

    void validate() const;
};

std::string ae_to_json(const AutoencoderParams& p);
AutoencoderParams ae_from_json(const std::string& text);
void save_ae(const std::string& path, const AutoencoderParams& p);
AutoencoderParams load_ae(const std::string& path);

struct AeTerms {
    double loss = 0.0;       // mse + lambda_c * jac_frob2
    double mse = 0.0;        // mean over batch and dims of |x_rec - x|^2
    double jac_frob2 = 0.0;  // <|grad f_enc|^2_F> over the batch
};

// Loss of one batch (X is n x N, row per sample).
AeTerms ae_loss(const AutoencoderParams& p, const Matrix& X);

// Loss plus gradients for both networks.
AeTerms ae_gradient(const AutoencoderParams& p, const Matrix& X, MlpGrads& enc_grads,
                    MlpGrads& dec_grads);

// Builds the mirrored autoencoder for an encoder layer pattern: encoder uses
// `enc_hidden` activations, the decoder reverses the dims with relu hidden
// layers and a linear final layer.
AutoencoderParams ae_init(const std::vector<int>& enc_dims, Activation enc_hidden,
                          double contractive_weight, Rng& rng);

// Trains reconstruction + contractive penalty with fresh batches; only the
// optimizer/learning_rate/batch_size/steps fields of `cfg` apply. Non-finite
// losses abort with a step diagnostic.
AutoencoderParams train_contractive_ae(AutoencoderParams init, const BatchProvider& batches,
                                       const TrainingConfig& cfg);

// ---- Supervised probes ---------------------------------------------------------

enum class ProbeKind { wavepacket_center, drop_orientation };

struct SupervisedTask {
    ProbeKind kind = ProbeKind::wavepacket_center;
    // Probe hyperparameters; defaults set per kind by make_task().
    std::vector<int> hidden = {50, 50};
    double learning_rate = 1e-3;
    long batch_size = 200;
    long steps = 10000;

    static SupervisedTask make(ProbeKind kind);
};

// The drop probe's target cost: mean of
//   (n1 - dr)^2 + dr ((n2 - cos 2theta)^2 + (n3 - sin 2theta)^2)
// over samples; preds is n x 3, labels is n x 2 holding (dr, theta).
double drop_probe_cost(const Matrix& preds, const Matrix& labels);

// Trains an MLP probe from the features to the labels and returns the final
// cost on the held-out tail (last 20% of rows; samples are i.i.d. by
// construction). Wavepacket: MSE to the scalar center. Drop: drop_probe_cost
// against (dr, theta) labels.
double supervised_eval(const Matrix& features, const Matrix& labels,
                       const SupervisedTask& task, std::uint64_t seed);

}  // namespace rmi
