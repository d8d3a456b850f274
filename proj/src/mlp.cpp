#include "rmi/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rmi {

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::tanh_fn;
    if (name == "relu") return Activation::relu_fn;
    if (name == "linear") return Activation::linear_fn;
    throw ConfigError("unknown activation: " + name);
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::tanh_fn: return "tanh";
        case Activation::relu_fn: return "relu";
        case Activation::linear_fn: return "linear";
    }
    throw ConfigError("unknown activation");
}

long MlpParams::n_params() const {
    long n = 0;
    for (const auto& l : layers) n += l.W.size() + l.b.size();
    return n;
}

void MlpParams::validate() const {
    if (layers.empty()) throw ConfigError("MLP needs at least one layer");
    for (size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].b.size() != layers[l].W.rows())
            throw ConfigError("MLP layer bias dim mismatch");
        if (l > 0 && layers[l].W.cols() != layers[l - 1].W.rows())
            throw ConfigError("MLP layer dims do not chain");
    }
    if (layers.back().act != Activation::linear_fn)
        throw ConfigError("MLP final activation must be linear");
}

MlpParams mlp_init(const std::vector<int>& dims, const std::vector<Activation>& acts,
                   Rng& rng) {
    if (dims.size() < 2) throw ConfigError("MLP needs input and output dims");
    if (acts.size() != dims.size() - 1)
        throw ConfigError("MLP needs one activation per layer");
    MlpParams p;
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        MlpLayer layer;
        const int fan_in = dims[l], fan_out = dims[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        layer.W.resize(fan_out, fan_in);
        for (int i = 0; i < fan_out; ++i)
            for (int j = 0; j < fan_in; ++j) layer.W(i, j) = rng.uniform(-bound, bound);
        layer.b = Vector::Zero(fan_out);
        layer.act = acts[l];
        p.layers.push_back(std::move(layer));
    }
    p.validate();
    return p;
}

MlpParams mlp_init(const std::vector<int>& dims, Activation hidden, Rng& rng) {
    std::vector<Activation> acts(dims.size() - 1, hidden);
    acts.back() = Activation::linear_fn;
    return mlp_init(dims, acts, rng);
}

namespace {

void apply_activation(Activation act, Matrix& A, Matrix* deriv) {
    switch (act) {
        case Activation::tanh_fn:
            A = A.array().tanh();
            if (deriv) *deriv = 1.0 - A.array().square();
            break;
        case Activation::relu_fn:
            if (deriv) *deriv = (A.array() > 0.0).cast<double>();
            A = A.cwiseMax(0.0);
            break;
        case Activation::linear_fn:
            if (deriv) deriv->setOnes(A.rows(), A.cols());
            break;
    }
}

}  // namespace

MlpForward mlp_forward(const MlpParams& p, const Matrix& Xt) {
    if (Xt.rows() != p.input_dim()) throw ConfigError("MLP forward: input dim mismatch");
    MlpForward f;
    const size_t L = p.layers.size();
    f.Z.resize(L + 1);
    f.D.resize(L);
    f.Z[0] = Xt;
    for (size_t l = 0; l < L; ++l) {
        Matrix A = (p.layers[l].W * f.Z[l]).colwise() + p.layers[l].b;
        const bool last = (l + 1 == L);
        apply_activation(p.layers[l].act, A, last ? nullptr : &f.D[l]);
        f.Z[l + 1] = std::move(A);
    }
    return f;
}

std::vector<Matrix> mlp_jacobians_split(const MlpParams& p, const MlpForward& fwd) {
    const size_t L = p.layers.size();
    const int K = p.output_dim();
    const long n = fwd.Z[0].cols();
    std::vector<Matrix> Jt(K);
    // Reverse sweep per output row: T_l holds D_l * (prefix row)^T per sample.
    for (int k = 0; k < K; ++k) {
        if (L == 1) {
            Jt[k] = p.layers[0].W.row(k).transpose().replicate(1, n);
            continue;
        }
        Matrix T = fwd.D[L - 2].array().colwise() *
                   p.layers[L - 1].W.row(k).transpose().array();
        for (size_t l = L - 2; l >= 1; --l) {
            Matrix pre = p.layers[l].W.transpose() * T;
            T = pre.array() * fwd.D[l - 1].array();
        }
        Jt[k].noalias() = p.layers[0].W.transpose() * T;  // N x n
    }
    return Jt;
}

Matrix mlp_jacobians(const MlpParams& p, const MlpForward& fwd) {
    const int K = p.output_dim();
    const int N = p.input_dim();
    const long n = fwd.Z[0].cols();
    const std::vector<Matrix> Jt = mlp_jacobians_split(p, fwd);
    Matrix J(n * K, N);
    for (int k = 0; k < K; ++k)
        for (long s = 0; s < n; ++s) J.row(s * K + k) = Jt[k].col(s).transpose();
    return J;
}

Vector MlpFeature::value(const Vector& x) const {
    return mlp_forward(p_, x).output().col(0);
}

Matrix MlpFeature::jacobian(const Vector& x) const {
    MlpForward f = mlp_forward(p_, x);
    return mlp_jacobians(p_, f);
}

Matrix MlpFeature::values(const Matrix& X) const {
    return mlp_forward(p_, X.transpose()).output().transpose();
}

Matrix MlpFeature::jacobians(const Matrix& X) const {
    MlpForward f = mlp_forward(p_, X.transpose());
    return mlp_jacobians(p_, f);
}

namespace {

void emit_number_array(std::string& out, const double* v, long n) {
    char buf[40];
    out += '[';
    for (long i = 0; i < n; ++i) {
        if (i) out += ',';
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        out += buf;
    }
    out += ']';
}

}  // namespace

std::string mlp_to_json(const MlpParams& p) {
    std::string out = "{\n  \"format\": \"mlp-1\",\n  \"layers\": [\n";
    for (size_t l = 0; l < p.layers.size(); ++l) {
        const auto& layer = p.layers[l];
        out += "    {\"out\": " + std::to_string(layer.W.rows()) +
               ", \"in\": " + std::to_string(layer.W.cols()) + ", \"activation\": \"" +
               activation_name(layer.act) + "\",\n     \"W\": ";
        // row-major emission
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> wr = layer.W;
        emit_number_array(out, wr.data(), wr.size());
        out += ",\n     \"b\": ";
        emit_number_array(out, layer.b.data(), layer.b.size());
        out += l + 1 < p.layers.size() ? "},\n" : "}\n";
    }
    out += "  ]\n}\n";
    return out;
}

MlpParams mlp_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model parse error: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != "mlp-1")
        throw ConfigError("model file is not in mlp-1 format");
    MlpParams p;
    for (const auto& jl : j.at("layers")) {
        MlpLayer layer;
        const int out = jl.at("out").get<int>();
        const int in = jl.at("in").get<int>();
        layer.act = activation_from_name(jl.at("activation").get<std::string>());
        const auto& w = jl.at("W");
        const auto& b = jl.at("b");
        if (static_cast<long>(w.size()) != static_cast<long>(out) * in ||
            static_cast<long>(b.size()) != out)
            throw ConfigError("model layer size mismatch");
        layer.W.resize(out, in);
        for (int i = 0; i < out; ++i)
            for (int k = 0; k < in; ++k) layer.W(i, k) = w[i * in + k].get<double>();
        layer.b.resize(out);
        for (int i = 0; i < out; ++i) layer.b(i) = b[i].get<double>();
        p.layers.push_back(std::move(layer));
    }
    p.validate();
    return p;
}

void save_mlp(const std::string& path, const MlpParams& p) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write model file: " + path);
    f << mlp_to_json(p);
}

MlpParams load_mlp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read model file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return mlp_from_json(ss.str());
}

}  // namespace rmi
