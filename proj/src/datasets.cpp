#include "rmi/datasets.hpp"

#include <cmath>
#include <vector>

#include "rmi/rng.hpp"

namespace rmi {

// ---- Spiral -----------------------------------------------------------------

void SpiralConfig::validate() const {
    if (covariance.rows() != 2 || covariance.cols() != 2)
        throw ConfigError("spiral covariance must be 2x2");
    if (std::abs(covariance(0, 1) - covariance(1, 0)) > 1e-12)
        throw ConfigError("spiral covariance must be symmetric");
    Eigen::LLT<Matrix> llt(covariance);
    if (llt.info() != Eigen::Success)
        throw ConfigError("spiral covariance must be positive-definite");
}

SampleBatch gen_spiral(long n, const SpiralConfig& cfg, std::uint64_t seed) {
    if (n < 1) throw ConfigError("need at least one sample");
    cfg.validate();
    const Matrix L = Eigen::LLT<Matrix>(cfg.covariance).matrixL();
    SampleBatch out;
    out.data.resize(n, 2);
    for (long i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double x1 = L(0, 0) * z1;
        const double x2 = L(1, 0) * z1 + L(1, 1) * z2;
        const double r = std::sqrt(x1 * x1 + x2 * x2);
        const double c = std::cos(cfg.alpha * r);
        const double s = std::sin(cfg.alpha * r);
        out.data(i, 0) = x1 * c - x2 * s;
        out.data(i, 1) = x1 * s + x2 * c;
    }
    return out;
}

// ---- Wave packet -------------------------------------------------------------

void WavePacketConfig::validate() const {
    if (n_sites < 1) throw ConfigError("wave packet needs at least one site");
    if (!(width > 0.0)) throw ConfigError("wave packet width must be positive");
    if (center_lo > center_hi || center_lo < 1.0 || center_hi > n_sites)
        throw ConfigError("wave packet center range must lie within [1, n_sites]");
    if (noise_std < 0.0) throw ConfigError("wave packet noise std must be non-negative");
}

WavePacketData gen_wave_packet(long n, const WavePacketConfig& cfg, std::uint64_t seed) {
    if (n < 1) throw ConfigError("need at least one sample");
    cfg.validate();
    WavePacketData out;
    out.batch.data.resize(n, cfg.n_sites);
    out.centers.resize(n);
    const double inv_w2 = 1.0 / (cfg.width * cfg.width);
    for (long i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const double c = rng.uniform(cfg.center_lo, cfg.center_hi);
        out.centers(i) = c;
        for (int j = 1; j <= cfg.n_sites; ++j) {
            const double d = j - c;
            double x = std::exp(-d * d * inv_w2);
            if (cfg.noise_std > 0.0) x += cfg.noise_std * rng.normal();
            out.batch.data(i, j - 1) = x;
        }
    }
    return out;
}

// ---- Liquid drop -------------------------------------------------------------

void DropConfig::validate() const {
    if (!(radius > 0.0)) throw ConfigError("drop radius must be positive");
    if (n_particles < 2) throw ConfigError("drop needs at least two particles");
    if (exponent < 1) throw ConfigError("drop exponent must be positive");
    if (!(0.0 < d_coll && d_coll < d_eq && d_eq < radius))
        throw ConfigError("drop requires 0 < d_coll < d_eq < radius");
    if (wall_strength <= 0.0) throw ConfigError("drop wall strength must be positive");
    if (!(therm_step > 0.0)) throw ConfigError("drop thermalization step must be positive");
    if (temperature < 0.0) throw ConfigError("drop temperature must be non-negative");
    if (therm_steps < 0) throw ConfigError("drop thermalization steps must be non-negative");
    if (deform_lo < 0.0 || deform_lo > deform_hi)
        throw ConfigError("drop deformation range invalid");
    if (angle_lo > angle_hi) throw ConfigError("drop angle range invalid");
    if (!(min_spacing >= 0.0)) throw ConfigError("drop min spacing must be non-negative");
    if (!(force_cap > 0.0)) throw ConfigError("drop force cap must be positive");
}

double lj_potential(double d, const DropConfig& cfg) {
    if (!(d > 0.0)) throw ConfigError("lj_potential requires d > 0");
    const double q = std::pow(cfg.d_eq / d, cfg.exponent);
    if (d >= cfg.d_coll) return 0.5 * q * q - 0.5 * q + 0.5;
    const double qc = std::pow(cfg.d_eq / cfg.d_coll, cfg.exponent);
    return -d * d / (cfg.d_coll * cfg.d_coll) + 1.5 + 0.5 * qc * qc - 0.5 * qc;
}

double drop_energy(const Vector& coords, double dr, double theta, const DropConfig& cfg) {
    const int np = cfg.n_particles;
    if (coords.size() != 2 * np) throw ConfigError("drop configuration size mismatch");
    const double A = cfg.axis_a(dr);
    const double B = cfg.axis_b(dr);
    const double ct = std::cos(theta), st = std::sin(theta);
    double e = 0.0;
    for (int i = 0; i < np; ++i) {
        const double xi = coords(2 * i), yi = coords(2 * i + 1);
        for (int j = i + 1; j < np; ++j) {
            const double dx = xi - coords(2 * j);
            const double dy = yi - coords(2 * j + 1);
            e += lj_potential(std::sqrt(dx * dx + dy * dy), cfg);
        }
        const double u = ct * xi + st * yi;
        const double v = -st * xi + ct * yi;
        if ((u / A) * (u / A) + (v / B) * (v / B) > 1.0)
            e += cfg.wall_strength * std::sqrt(xi * xi + yi * yi);
    }
    return e;
}

namespace {

// One placement attempt: uniform proposals inside the rotated ellipse with a
// minimum pairwise spacing. Fails (returns false) when the proposal budget is
// exhausted, which is possible but rare once most of the area is excluded.
bool try_place(Rng& rng, const DropConfig& cfg, double A, double B, double ct, double st,
               std::vector<double>& px, std::vector<double>& py) {
    const int np = cfg.n_particles;
    const double min2 = cfg.min_spacing * cfg.min_spacing;
    px.clear();
    py.clear();
    long total_tries = 0;
    while (static_cast<int>(px.size()) < np) {
        long particle_tries = 0;
        for (;;) {
            ++particle_tries;
            ++total_tries;
            if (particle_tries > 10000 || total_tries > 200000) return false;
            const double x = rng.uniform(-A, A);
            const double y = rng.uniform(-A, A);
            const double u = ct * x + st * y;
            const double v = -st * x + ct * y;
            if ((u / A) * (u / A) + (v / B) * (v / B) > 1.0) continue;
            bool ok = true;
            for (std::size_t k = 0; k < px.size(); ++k) {
                const double dx = px[k] - x, dy = py[k] - y;
                if (dx * dx + dy * dy < min2) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            px.push_back(x);
            py.push_back(y);
            break;
        }
    }
    return true;
}

void place_particles(Rng& rng, const DropConfig& cfg, double A, double B, double ct,
                     double st, std::vector<double>& px, std::vector<double>& py) {
    for (int restart = 0; restart < 50; ++restart)
        if (try_place(rng, cfg, A, B, ct, st, px, py)) return;
    throw ConfigError("drop placement failed: proposal budget exceeded repeatedly");
}

void relax(Rng& rng, const DropConfig& cfg, double A, double B, double ct, double st,
           std::vector<double>& px, std::vector<double>& py) {
    const int np = cfg.n_particles;
    const double dc2 = cfg.d_coll * cfg.d_coll;
    const double de2 = cfg.d_eq * cfg.d_eq;
    const double inner_coef = -2.0 / dc2;
    const double eta = cfg.therm_step;
    const double noise = std::sqrt(2.0 * eta * cfg.temperature);
    const double cap2 = cfg.force_cap * cfg.force_cap;
    const int half_exp = cfg.exponent / 2;  // q6 = (de2/d2)^(n/2), n even
    std::vector<double> gx(np), gy(np);

    for (long step = 0; step < cfg.therm_steps; ++step) {
        std::fill(gx.begin(), gx.end(), 0.0);
        std::fill(gy.begin(), gy.end(), 0.0);
        // Pairwise potential gradient without square roots: the outer-branch
        // coefficient on (r_i - r_j) is n (q/2 - q^2) / d^2 with
        // q = (d_eq/d)^n, and the capped core below d_coll is linear.
        for (int i = 0; i < np; ++i) {
            for (int j = i + 1; j < np; ++j) {
                const double dx = px[i] - px[j];
                const double dy = py[i] - py[j];
                const double d2 = dx * dx + dy * dy;
                double coef;
                if (d2 < dc2) {
                    coef = inner_coef;
                } else {
                    const double r2 = de2 / d2;
                    double q = r2;
                    for (int e = 1; e < half_exp; ++e) q *= r2;
                    coef = cfg.exponent * (0.5 * q - q * q) / d2;
                }
                gx[i] += coef * dx;
                gy[i] += coef * dy;
                gx[j] -= coef * dx;
                gy[j] -= coef * dy;
            }
        }
        for (int i = 0; i < np; ++i) {
            const double u = ct * px[i] + st * py[i];
            const double v = -st * px[i] + ct * py[i];
            if ((u / A) * (u / A) + (v / B) * (v / B) > 1.0) {
                const double rn = std::sqrt(px[i] * px[i] + py[i] * py[i]);
                if (rn > 0.0) {
                    gx[i] += cfg.wall_strength * px[i] / rn;
                    gy[i] += cfg.wall_strength * py[i] / rn;
                }
            }
            const double g2 = gx[i] * gx[i] + gy[i] * gy[i];
            if (g2 > cap2) {
                const double scale = cfg.force_cap / std::sqrt(g2);
                gx[i] *= scale;
                gy[i] *= scale;
            }
            px[i] -= eta * gx[i];
            py[i] -= eta * gy[i];
            px[i] += noise * rng.normal();
            py[i] += noise * rng.normal();
        }
    }
}

}  // namespace

DropData gen_liquid_drop(long n, const DropConfig& cfg, std::uint64_t seed) {
    if (n < 1) throw ConfigError("need at least one sample");
    cfg.validate();
    if (cfg.exponent % 2 != 0)
        throw ConfigError("drop exponent must be even for the squared-distance force path");
    DropData out;
    out.batch.data.resize(n, 2 * cfg.n_particles);
    out.labels.resize(n, 2);
    std::vector<double> px, py;
    for (long i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const double dr = rng.uniform(cfg.deform_lo, cfg.deform_hi);
        const double th = rng.uniform(cfg.angle_lo, cfg.angle_hi);
        const double A = cfg.axis_a(dr);
        const double B = cfg.axis_b(dr);
        const double ct = std::cos(th), st = std::sin(th);
        place_particles(rng, cfg, A, B, ct, st, px, py);
        relax(rng, cfg, A, B, ct, st, px, py);
        for (int p = 0; p < cfg.n_particles; ++p) {
            out.batch.data(i, 2 * p) = px[p];
            out.batch.data(i, 2 * p + 1) = py[p];
        }
        out.labels(i, 0) = dr;
        out.labels(i, 1) = th;
    }
    return out;
}

// ---- Batch providers ----------------------------------------------------------

BatchProvider spiral_batches(const SpiralConfig& cfg, long batch_size, std::uint64_t seed) {
    cfg.validate();
    return [cfg, batch_size, seed](long step) {
        return gen_spiral(batch_size, cfg, Rng::derive(seed, static_cast<std::uint64_t>(step)))
            .data;
    };
}

BatchProvider wave_packet_batches(const WavePacketConfig& cfg, long batch_size,
                                  std::uint64_t seed) {
    cfg.validate();
    return [cfg, batch_size, seed](long step) {
        return gen_wave_packet(batch_size, cfg,
                               Rng::derive(seed, static_cast<std::uint64_t>(step)))
            .batch.data;
    };
}

BatchProvider pool_batches(std::shared_ptr<const Matrix> pool, long batch_size,
                           std::uint64_t seed) {
    if (!pool || pool->rows() < 2) throw ConfigError("pool must hold at least two samples");
    return [pool, batch_size, seed](long step) {
        Rng rng(seed, static_cast<std::uint64_t>(step));
        Matrix batch(batch_size, pool->cols());
        const auto n = static_cast<std::uint64_t>(pool->rows());
        for (long i = 0; i < batch_size; ++i)
            batch.row(i) = pool->row(static_cast<long>(rng.raw() % n));
        return batch;
    };
}

}  // namespace rmi
