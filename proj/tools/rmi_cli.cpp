// Command-line front end: dataset generation, RMI scoring, feature training,
// baselines, comparison tables, and SVG history plots.
#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmi/baselines.hpp"
#include "rmi/cost.hpp"
#include "rmi/csv.hpp"
#include "rmi/datasets.hpp"
#include "rmi/features.hpp"
#include "rmi/grid.hpp"
#include "rmi/mlp.hpp"
#include "rmi/rmi_core.hpp"
#include "rmi/rng.hpp"
#include "rmi/svg.hpp"
#include "rmi/train.hpp"

using nlohmann::json;
using namespace rmi;

namespace {

// ---- small helpers -----------------------------------------------------------

std::string strip_csv_ext(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
        return path.substr(0, path.size() - 4);
    return path;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << text;
    if (!out) throw ConfigError("write failed: " + path);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
    }
}

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key \"" + key + "\" has the wrong type");
    }
}

template <typename T>
T get_required(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": key \"" + key + "\" has the wrong type");
    }
}

void require_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("referenced file does not exist: " + path);
}

// ---- feature registry ----------------------------------------------------------

std::shared_ptr<FeatureFunction> make_feature(const std::string& name,
                                              const SampleBatch& data, int pca_k) {
    if (name == "pca") return pca_fit(data, pca_k);
    if (name.rfind("mlp:", 0) == 0) {
        std::string path = name.substr(4);
        require_file(path);
        return std::make_shared<MlpFeature>(load_mlp(path));
    }
    if (name.rfind("ae:", 0) == 0) {
        std::string path = name.substr(3);
        require_file(path);
        return std::make_shared<MlpFeature>(load_ae(path).encoder);
    }
    HandcraftedKind kind = handcrafted_kind_from_name(name);
    return std::make_shared<HandcraftedFeature>(kind, static_cast<int>(data.n_dims()));
}

RmiEstimate score_feature(const SampleBatch& data, const FeatureFunction& f, int kf,
                          double s) {
    Matrix Y = f.values(data.data);
    GridSpec grid = auto_grid(Y, kf, s);
    return compute_rmi(data, f, grid);
}

// ---- training configs ------------------------------------------------------------

struct DataSource {
    // exactly one of the two is set
    std::string data_path;
    json generator;  // resolved generator config (includes "system")

    long n_dims = 0;
    std::shared_ptr<const Matrix> pool;  // when data_path is set
};

json resolve_spiral(const json& g, SpiralConfig& cfg) {
    check_keys(g, {"system", "seed", "alpha"}, "generator");
    cfg.alpha = get_or<double>(g, "alpha", cfg.alpha);
    cfg.validate();
    json out;
    out["system"] = "spiral";
    out["seed"] = get_required<std::uint64_t>(g, "seed", "generator");
    out["alpha"] = cfg.alpha;
    out["covariance"] = {{cfg.covariance(0, 0), cfg.covariance(0, 1)},
                         {cfg.covariance(1, 0), cfg.covariance(1, 1)}};
    return out;
}

json resolve_wavepacket(const json& g, WavePacketConfig& cfg) {
    check_keys(g, {"system", "seed", "n_sites", "width", "center_lo", "center_hi",
                   "sigma_xi"},
               "generator");
    cfg.n_sites = get_or<int>(g, "n_sites", cfg.n_sites);
    cfg.width = get_or<double>(g, "width", cfg.width);
    cfg.center_lo = get_or<double>(g, "center_lo", cfg.center_lo);
    cfg.center_hi = get_or<double>(g, "center_hi", cfg.center_hi);
    cfg.noise_std = get_or<double>(g, "sigma_xi", cfg.noise_std);
    cfg.validate();
    json out;
    out["system"] = "wavepacket";
    out["seed"] = get_required<std::uint64_t>(g, "seed", "generator");
    out["n_sites"] = cfg.n_sites;
    out["width"] = cfg.width;
    out["center_lo"] = cfg.center_lo;
    out["center_hi"] = cfg.center_hi;
    out["sigma_xi"] = cfg.noise_std;
    return out;
}

// Builds the per-step batch source for a train/autoencoder run config.
DataSource resolve_data_source(const json& cfg, long batch_size, const char* where) {
    const bool has_data = cfg.contains("data");
    const bool has_gen = cfg.contains("generator");
    if (has_data == has_gen)
        throw ConfigError(std::string(where) +
                          ": specify exactly one of \"data\" or \"generator\"");
    DataSource src;
    if (has_data) {
        src.data_path = get_required<std::string>(cfg, "data", where);
        require_file(src.data_path);
        SampleBatch batch = load_dataset(src.data_path);
        if (batch.n_samples() < batch_size)
            throw ConfigError(std::string(where) + ": pool smaller than one batch");
        src.n_dims = batch.n_dims();
        src.pool = std::make_shared<const Matrix>(std::move(batch.data));
    } else {
        const json& g = cfg.at("generator");
        std::string system = get_required<std::string>(g, "system", "generator");
        if (system == "spiral") {
            SpiralConfig scfg;
            src.generator = resolve_spiral(g, scfg);
            src.n_dims = 2;
        } else if (system == "wavepacket") {
            WavePacketConfig wcfg;
            src.generator = resolve_wavepacket(g, wcfg);
            src.n_dims = wcfg.n_sites;
        } else if (system == "drop") {
            throw ConfigError(
                "drop training draws from a pregenerated pool; run `gen --system "
                "drop` first and pass its CSV as \"data\"");
        } else {
            throw ConfigError("generator: unknown system \"" + system + "\"");
        }
    }
    return src;
}

BatchProvider make_batches(const DataSource& src, long batch_size,
                           std::uint64_t batch_seed) {
    if (src.pool) return pool_batches(src.pool, batch_size, batch_seed);
    std::string system = src.generator.at("system").get<std::string>();
    std::uint64_t seed = src.generator.at("seed").get<std::uint64_t>();
    if (system == "spiral") {
        SpiralConfig cfg;
        cfg.alpha = src.generator.at("alpha").get<double>();
        return spiral_batches(cfg, batch_size, seed);
    }
    WavePacketConfig cfg;
    cfg.n_sites = src.generator.at("n_sites").get<int>();
    cfg.width = src.generator.at("width").get<double>();
    cfg.center_lo = src.generator.at("center_lo").get<double>();
    cfg.center_hi = src.generator.at("center_hi").get<double>();
    cfg.noise_std = src.generator.at("sigma_xi").get<double>();
    return wave_packet_batches(cfg, batch_size, seed);
}

// Parses the "training" object; reg/grid keys may be disallowed (autoencoder).
json resolve_training(const json& t, TrainingConfig& cfg, std::uint64_t& batch_seed,
                      bool allow_reg) {
    std::vector<std::string> keys = {"optimizer", "learning_rate", "batch_size",
                                     "steps", "batch_seed"};
    if (allow_reg)
        for (const char* k : {"reg_a", "reg_tau", "reg_b", "sigma_target",
                              "grid_bins", "kernel_factor"})
            keys.push_back(k);
    check_keys(t, keys, "training");
    cfg.optimizer = optimizer_from_name(
        get_or<std::string>(t, "optimizer", optimizer_name(cfg.optimizer)));
    cfg.learning_rate = get_or<double>(t, "learning_rate", cfg.learning_rate);
    cfg.batch_size = get_or<long>(t, "batch_size", cfg.batch_size);
    cfg.steps = get_or<long>(t, "steps", cfg.steps);
    if (allow_reg) {
        cfg.reg_a = get_or<double>(t, "reg_a", cfg.reg_a);
        cfg.reg_tau = get_or<double>(t, "reg_tau", cfg.reg_tau);
        cfg.reg_b = get_or<double>(t, "reg_b", cfg.reg_b);
        cfg.sigma_target = get_or<double>(t, "sigma_target", cfg.sigma_target);
        cfg.grid_bins = get_or<int>(t, "grid_bins", cfg.grid_bins);
        cfg.kernel_factor = get_or<double>(t, "kernel_factor", cfg.kernel_factor);
    }
    cfg.validate();
    batch_seed = get_or<std::uint64_t>(t, "batch_seed", batch_seed);
    json out;
    out["optimizer"] = optimizer_name(cfg.optimizer);
    out["learning_rate"] = cfg.learning_rate;
    out["batch_size"] = cfg.batch_size;
    out["steps"] = cfg.steps;
    out["batch_seed"] = batch_seed;
    if (allow_reg) {
        out["reg_a"] = cfg.reg_a;
        out["reg_tau"] = cfg.reg_tau;
        out["reg_b"] = cfg.reg_b;
        out["sigma_target"] = cfg.sigma_target;
        out["grid_bins"] = cfg.grid_bins;
        out["kernel_factor"] = cfg.kernel_factor;
    }
    return out;
}

json resolve_net(const json& f, const char* where, std::vector<int>& dims,
                 Activation& act, std::uint64_t& init_seed) {
    check_keys(f, {"dims", "activation", "init_seed"}, where);
    dims = get_required<std::vector<int>>(f, "dims", where);
    act = activation_from_name(get_or<std::string>(f, "activation", "tanh"));
    init_seed = get_or<std::uint64_t>(f, "init_seed", 1);
    json out;
    out["dims"] = dims;
    out["activation"] = activation_name(act);
    out["init_seed"] = init_seed;
    return out;
}

void write_meta(const std::string& csv_path, const json& meta) {
    write_text(strip_csv_ext(csv_path) + ".meta.json", meta.dump(2) + "\n");
}

// ---- subcommand implementations ----------------------------------------------

int run_gen(const std::string& system, long n, std::uint64_t seed,
            const std::string& out, std::optional<double> sigma_xi) {
    if (n < 2) throw ConfigError("gen: --n must be at least 2");
    if (sigma_xi && system != "wavepacket")
        throw ConfigError("gen: --sigma-xi only applies to --system wavepacket");
    const std::string stem = strip_csv_ext(out);
    json meta;
    meta["command"] = "gen";
    meta["n"] = n;
    meta["seed"] = seed;
    if (system == "spiral") {
        SpiralConfig cfg;
        SampleBatch batch = gen_spiral(n, cfg, seed);
        write_csv(out, dataset_columns(batch.n_dims()), batch.data);
        json g = resolve_spiral(json{{"system", "spiral"}, {"seed", seed}}, cfg);
        meta["generator"] = g;
        meta["labels"] = nullptr;
    } else if (system == "wavepacket") {
        WavePacketConfig cfg;
        if (sigma_xi) cfg.noise_std = *sigma_xi;
        json g{{"system", "wavepacket"}, {"seed", seed}, {"sigma_xi", cfg.noise_std}};
        json resolved = resolve_wavepacket(g, cfg);
        WavePacketData data = gen_wave_packet(n, cfg, seed);
        write_csv(out, dataset_columns(data.batch.n_dims()), data.batch.data);
        write_csv(stem + ".labels.csv", {"center"}, data.centers);
        meta["generator"] = resolved;
        meta["labels"] = stem + ".labels.csv";
    } else if (system == "drop") {
        DropConfig cfg;
        DropData data = gen_liquid_drop(n, cfg, seed);
        write_csv(out, dataset_columns(data.batch.n_dims()), data.batch.data);
        write_csv(stem + ".labels.csv", {"dr", "theta"}, data.labels);
        json g;
        g["system"] = "drop";
        g["seed"] = seed;
        g["radius"] = cfg.radius;
        g["n_particles"] = cfg.n_particles;
        g["exponent"] = cfg.exponent;
        g["d_eq"] = cfg.d_eq;
        g["d_coll"] = cfg.d_coll;
        g["wall_strength"] = cfg.wall_strength;
        g["therm_step"] = cfg.therm_step;
        g["temperature"] = cfg.temperature;
        g["therm_steps"] = cfg.therm_steps;
        g["deform_range"] = {cfg.deform_lo, cfg.deform_hi};
        g["angle_range"] = {cfg.angle_lo, cfg.angle_hi};
        g["min_spacing"] = cfg.min_spacing;
        g["force_cap"] = cfg.force_cap;
        meta["generator"] = g;
        meta["labels"] = stem + ".labels.csv";
    } else {
        throw ConfigError("gen: unknown system \"" + system + "\"");
    }
    write_meta(out, meta);
    std::cout << "wrote " << out << " (" << n << " samples)\n";
    return 0;
}

int run_score(const std::string& data_path, const std::string& feature, int kf,
              double s, int pca_k, const std::string& out) {
    require_file(data_path);
    SampleBatch data = load_dataset(data_path);
    auto f = make_feature(feature, data, pca_k);
    RmiEstimate est = score_feature(data, *f, kf, s);
    char line[160];
    std::snprintf(line, sizeof(line), "rmi=%.10g entropy=%.10g penalty=%.10g\n",
                  est.value, est.entropy_term, est.jacobian_term);
    std::cout << line;
    Matrix row(1, 3);
    row << est.value, est.entropy_term, est.jacobian_term;
    write_csv(out, {"rmi", "entropy", "penalty"}, row);
    json meta{{"command", "score"}, {"data", data_path},    {"feature", feature},
              {"kf", kf},           {"s", s},               {"pca_k", pca_k}};
    write_meta(out, meta);
    return 0;
}

int run_compare(const std::string& data_path, const std::string& features, int kf,
                double s, int pca_k, const std::string& out) {
    require_file(data_path);
    SampleBatch data = load_dataset(data_path);
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= features.size()) {
        std::size_t pos = features.find(',', start);
        if (pos == std::string::npos) pos = features.size();
        if (pos > start) names.push_back(features.substr(start, pos - start));
        start = pos + 1;
    }
    if (names.empty()) throw ConfigError("compare: --features list is empty");
    std::ofstream table(out, std::ios::binary);
    if (!table) throw ConfigError("cannot open for writing: " + out);
    table << "feature,rmi\n";
    for (const auto& name : names) {
        auto f = make_feature(name, data, pca_k);
        RmiEstimate est = score_feature(data, *f, kf, s);
        table << name << ',' << format_g17(est.value) << '\n';
        std::cout << name << ": rmi=" << format_g17(est.value) << "\n";
    }
    if (!table) throw ConfigError("write failed: " + out);
    json meta{{"command", "compare"}, {"data", data_path}, {"features", names},
              {"kf", kf},             {"s", s},            {"pca_k", pca_k}};
    write_meta(out, meta);
    return 0;
}

int run_train(const std::string& config_path, const std::string& out_model,
              const std::string& out_history) {
    json cfg = load_json_file(config_path);
    check_keys(cfg, {"data", "generator", "feature", "training"}, "config");
    if (!cfg.contains("feature")) throw ConfigError("config: missing \"feature\"");
    if (!cfg.contains("training")) throw ConfigError("config: missing \"training\"");

    TrainingConfig tcfg;
    std::uint64_t batch_seed = 1;
    json training_resolved =
        resolve_training(cfg.at("training"), tcfg, batch_seed, true);
    DataSource src = resolve_data_source(cfg, tcfg.batch_size, "config");

    std::vector<int> dims;
    Activation act = Activation::tanh_fn;
    std::uint64_t init_seed = 1;
    json net_resolved = resolve_net(cfg.at("feature"), "feature", dims, act, init_seed);
    if (dims.size() < 2) throw ConfigError("feature: dims needs at least two entries");
    if (dims.front() != src.n_dims)
        throw ConfigError("feature: input dim " + std::to_string(dims.front()) +
                          " does not match data dim " + std::to_string(src.n_dims));

    Rng rng(init_seed, 0);
    MlpParams params = mlp_init(dims, act, rng);
    BatchProvider batches = make_batches(src, tcfg.batch_size, batch_seed);
    TrainingResult result = train_feature(params, batches, tcfg);

    json resolved;
    resolved["command"] = "train";
    if (src.pool) resolved["data"] = src.data_path;
    else resolved["generator"] = src.generator;
    resolved["feature"] = net_resolved;
    resolved["training"] = training_resolved;

    json model = json::parse(mlp_to_json(params));
    model["config"] = resolved;
    write_text(out_model, model.dump(2) + "\n");
    result.history.save_csv(out_history);
    write_meta(out_history, resolved);

    char line[200];
    std::snprintf(line, sizeof(line),
                  "final: rmi=%.10g cost=%.10g kl=%.10g (degenerate steps: %ld)\n",
                  result.final_terms.rmi, result.final_terms.cost,
                  result.final_terms.kl, result.degenerate_steps);
    std::cout << line;
    return 0;
}

int run_autoencoder(const std::string& config_path, const std::string& out_model) {
    json cfg = load_json_file(config_path);
    check_keys(cfg, {"data", "generator", "encoder", "contractive_weight", "training"},
               "config");
    if (!cfg.contains("encoder")) throw ConfigError("config: missing \"encoder\"");
    if (!cfg.contains("training")) throw ConfigError("config: missing \"training\"");

    TrainingConfig tcfg;
    std::uint64_t batch_seed = 1;
    json training_resolved =
        resolve_training(cfg.at("training"), tcfg, batch_seed, false);
    DataSource src = resolve_data_source(cfg, tcfg.batch_size, "config");

    std::vector<int> dims;
    Activation act = Activation::tanh_fn;
    std::uint64_t init_seed = 1;
    json net_resolved = resolve_net(cfg.at("encoder"), "encoder", dims, act, init_seed);
    if (dims.size() < 2) throw ConfigError("encoder: dims needs at least two entries");
    if (dims.front() != src.n_dims)
        throw ConfigError("encoder: input dim " + std::to_string(dims.front()) +
                          " does not match data dim " + std::to_string(src.n_dims));
    double lambda_c = get_or<double>(cfg, "contractive_weight", 1e-2);

    Rng rng(init_seed, 0);
    AutoencoderParams params = ae_init(dims, act, lambda_c, rng);
    BatchProvider batches = make_batches(src, tcfg.batch_size, batch_seed);
    AutoencoderParams trained = train_contractive_ae(std::move(params), batches, tcfg);

    json resolved;
    resolved["command"] = "autoencoder";
    if (src.pool) resolved["data"] = src.data_path;
    else resolved["generator"] = src.generator;
    resolved["encoder"] = net_resolved;
    resolved["contractive_weight"] = lambda_c;
    resolved["training"] = training_resolved;

    json model = json::parse(ae_to_json(trained));
    model["config"] = resolved;
    write_text(out_model, model.dump(2) + "\n");
    // Standalone encoder net so `score --feature mlp:...` can use it directly.
    std::string enc_path = out_model;
    std::string suffix = ".json";
    if (enc_path.size() > suffix.size() &&
        enc_path.substr(enc_path.size() - suffix.size()) == suffix)
        enc_path = enc_path.substr(0, enc_path.size() - suffix.size());
    enc_path += ".encoder.json";
    json enc = json::parse(mlp_to_json(trained.encoder));
    enc["config"] = resolved;
    write_text(enc_path, enc.dump(2) + "\n");

    Matrix probe = batches(tcfg.steps);  // fresh batch for the report line
    AeTerms terms = ae_loss(trained, probe);
    char line[160];
    std::snprintf(line, sizeof(line), "final: loss=%.10g mse=%.10g jac_frob2=%.10g\n",
                  terms.loss, terms.mse, terms.jac_frob2);
    std::cout << line;
    std::cout << "encoder written to " << enc_path << "\n";
    return 0;
}

int run_supervised(const std::string& data_path, const std::string& labels_path,
                   const std::string& feature, const std::string& task_name,
                   std::uint64_t seed, int pca_k, const std::string& out) {
    require_file(data_path);
    require_file(labels_path);
    SampleBatch data = load_dataset(data_path);
    Matrix labels = load_labels(labels_path);
    if (labels.rows() != data.n_samples())
        throw ConfigError("labels row count does not match the dataset");
    SupervisedTask task;
    if (task_name == "center") task = SupervisedTask::make(ProbeKind::wavepacket_center);
    else if (task_name == "drop") task = SupervisedTask::make(ProbeKind::drop_orientation);
    else throw ConfigError("supervised: unknown task \"" + task_name + "\"");

    auto f = make_feature(feature, data, pca_k);
    Matrix features = f->values(data.data);
    double cost = supervised_eval(features, labels, task, seed);
    std::cout << "cost=" << format_g17(cost) << "\n";
    Matrix row(1, 1);
    row << cost;
    std::ofstream table(out, std::ios::binary);
    if (!table) throw ConfigError("cannot open for writing: " + out);
    table << "feature,task,cost\n"
          << feature << ',' << task_name << ',' << format_g17(cost) << '\n';
    if (!table) throw ConfigError("write failed: " + out);
    json meta{{"command", "supervised"}, {"data", data_path},
              {"labels", labels_path},   {"feature", feature},
              {"task", task_name},       {"seed", seed},
              {"pca_k", pca_k}};
    write_meta(out, meta);
    return 0;
}

int run_plot(const std::string& history_path, const std::string& out) {
    require_file(history_path);
    CsvTable table = read_csv(history_path);
    auto col = [&](const std::string& name) {
        for (std::size_t j = 0; j < table.columns.size(); ++j)
            if (table.columns[j] == name) return static_cast<long>(j);
        throw ConfigError(history_path + ": missing column \"" + name + "\"");
    };
    long cs = col("step"), cr = col("rmi"), cc = col("cost");
    SvgSeries rmi_series{"rmi", "#1f77b4", {}, {}};
    SvgSeries cost_series{"cost", "#d62728", {}, {}};
    for (long i = 0; i < table.values.rows(); ++i) {
        rmi_series.x.push_back(table.values(i, cs));
        rmi_series.y.push_back(table.values(i, cr));
        cost_series.x.push_back(table.values(i, cs));
        cost_series.y.push_back(table.values(i, cc));
    }
    write_line_svg(out, "training history", "step", "nats",
                   {rmi_series, cost_series});
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"renormalized mutual information toolkit"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for linear algebra");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::string gen_system, gen_out;
    long gen_n = 0;
    std::uint64_t gen_seed = 0;
    double gen_sigma_xi = -1.0;
    bool gen_sigma_set = false;
    gen->add_option("--system", gen_system, "spiral | wavepacket | drop")->required();
    gen->add_option("--n", gen_n, "sample count")->required();
    gen->add_option("--seed", gen_seed, "generator seed")->required();
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_option("--sigma-xi", gen_sigma_xi, "wavepacket field noise std")
        ->each([&](const std::string&) { gen_sigma_set = true; });

    // score
    auto* score = app.add_subcommand("score", "compute RMI of a feature on a dataset");
    std::string score_data, score_feature, score_out = "score.csv";
    int score_kf = -1, score_k = 1;
    double score_s = -1.0;
    score->add_option("--data", score_data, "dataset CSV")->required();
    score->add_option("--feature", score_feature,
                      "pca | mean | jx | jx2 | fE | fvar | fcorr | mlp:PATH | ae:PATH")
        ->required();
    score->add_option("--kf", score_kf, "histogram bins per axis (-1 = default)");
    score->add_option("--s", score_s, "kernel width in bin units (-1 = default)");
    score->add_option("--k", score_k, "pca component count");
    score->add_option("--out", score_out, "one-row result CSV");

    // train
    auto* train = app.add_subcommand("train", "gradient-train an MLP feature");
    std::string train_config, train_model, train_history;
    train->add_option("--config", train_config, "run config JSON")->required();
    train->add_option("--out-model", train_model, "trained model JSON")->required();
    train->add_option("--out-history", train_history, "history CSV")->required();

    // compare
    auto* compare = app.add_subcommand("compare", "score several features");
    std::string cmp_data, cmp_features, cmp_out = "compare.csv";
    int cmp_kf = -1, cmp_k = 1;
    double cmp_s = -1.0;
    compare->add_option("--data", cmp_data, "dataset CSV")->required();
    compare->add_option("--features", cmp_features, "comma-separated feature list")
        ->required();
    compare->add_option("--kf", cmp_kf, "histogram bins per axis (-1 = default)");
    compare->add_option("--s", cmp_s, "kernel width in bin units (-1 = default)");
    compare->add_option("--k", cmp_k, "pca component count");
    compare->add_option("--out", cmp_out, "comparison CSV");

    // autoencoder
    auto* ae = app.add_subcommand("autoencoder", "train a contractive autoencoder");
    std::string ae_config, ae_model;
    ae->add_option("--config", ae_config, "run config JSON")->required();
    ae->add_option("--out-model", ae_model, "trained autoencoder JSON")->required();

    // supervised
    auto* sup = app.add_subcommand("supervised", "probe a feature with a label task");
    std::string sup_data, sup_labels, sup_feature, sup_task, sup_out = "supervised.csv";
    std::uint64_t sup_seed = 5;
    int sup_k = 1;
    sup->add_option("--data", sup_data, "dataset CSV")->required();
    sup->add_option("--labels", sup_labels, "labels CSV")->required();
    sup->add_option("--feature", sup_feature, "feature name (see score)")->required();
    sup->add_option("--task", sup_task, "center | drop")->required();
    sup->add_option("--seed", sup_seed, "probe init/batch seed");
    sup->add_option("--k", sup_k, "pca component count");
    sup->add_option("--out", sup_out, "one-row result CSV");

    // plot
    auto* plot = app.add_subcommand("plot", "render a history CSV as SVG");
    std::string plot_history, plot_out;
    plot->add_option("--history", plot_history, "history CSV from train")->required();
    plot->add_option("--out", plot_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    if (const char* env = std::getenv("RMI_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) threads = t;
    }
    Eigen::setNbThreads(threads);

    try {
        if (gen->parsed())
            return run_gen(gen_system, gen_n, gen_seed, gen_out,
                           gen_sigma_set ? std::optional<double>(gen_sigma_xi)
                                         : std::nullopt);
        if (score->parsed())
            return run_score(score_data, score_feature, score_kf, score_s, score_k,
                             score_out);
        if (train->parsed()) return run_train(train_config, train_model, train_history);
        if (compare->parsed())
            return run_compare(cmp_data, cmp_features, cmp_kf, cmp_s, cmp_k, cmp_out);
        if (ae->parsed()) return run_autoencoder(ae_config, ae_model);
        if (sup->parsed())
            return run_supervised(sup_data, sup_labels, sup_feature, sup_task, sup_seed,
                                  sup_k, sup_out);
        if (plot->parsed()) return run_plot(plot_history, plot_out);
        std::cerr << "usage error: no subcommand\n";
        return 1;
    } catch (const DegenerateFeatureError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const TrainingError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
