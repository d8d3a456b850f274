#pragma once

#include <cstdint>
#include <memory>

#include "rmi/common.hpp"
#include "rmi/train.hpp"

namespace rmi {

// ---- Twirled Gaussian ("spiral") -------------------------------------------
struct SpiralConfig {
    Matrix covariance = (Matrix(2, 2) << 0.64, -0.56, -0.56, 1.0).finished();
    double alpha = 0.5;  // twist angle per unit radius

    void validate() const;
};

// Draws (x1', x2') from the zero-mean Gaussian and rotates each point by
// alpha * r' around the origin. Radius is preserved exactly.
SampleBatch gen_spiral(long n, const SpiralConfig& cfg, std::uint64_t seed);

// ---- Wave packet on a noisy field ------------------------------------------
struct WavePacketConfig {
    int n_sites = 100;
    double width = 9.0;        // delta_j
    double center_lo = 30.0;   // center drawn uniformly (continuous)
    double center_hi = 70.0;
    double noise_std = 0.38;   // sigma_xi

    void validate() const;
};

struct WavePacketData {
    SampleBatch batch;  // n x n_sites, x_j = xi_j + exp(-(j - c)^2 / width^2)
    Vector centers;     // the ground-truth packet center per sample
};

WavePacketData gen_wave_packet(long n, const WavePacketConfig& cfg, std::uint64_t seed);

// ---- Deformed liquid drop ---------------------------------------------------
struct DropConfig {
    double radius = 1.0;
    int n_particles = 60;
    int exponent = 6;        // Lennard-Jones exponent n
    double d_eq = 0.27;      // potential minimum distance
    double d_coll = 0.06;    // inner quadratic-cap crossover
    double wall_strength = 200.0;
    double therm_step = 1e-5;   // eta
    double temperature = 1e-3;  // T of the Langevin noise
    long therm_steps = 2000;
    double deform_lo = 0.0;  // delta-r range of the ellipse deformation
    double deform_hi = 0.8;
    double angle_lo = 0.0;  // theta range of the ellipse orientation
    double angle_hi = M_PI;
    // Minimum pairwise spacing enforced at placement so that no pair starts
    // inside the collapsed core of the potential (see gen_liquid_drop).
    double min_spacing = 0.15;
    // Cap on the norm of the per-particle potential gradient; keeps the
    // overlap-core forces from ejecting particles at the given step size.
    double force_cap = 200.0;

    double axis_a(double dr) const { return radius + dr; }
    double axis_b(double dr) const { return radius * radius / (radius + dr); }

    void validate() const;
};

// Pairwise Lennard-Jones potential with a quadratic cap below d_coll
// (continuity-corrected at the crossover). d <= 0 is an error.
double lj_potential(double d, const DropConfig& cfg);

// Total potential energy of one flattened configuration (interleaved
// x1,y1,x2,y2,... coordinates): all pair terms plus the boundary term
// W * |r| for particles outside the ellipse given by (dr, theta).
double drop_energy(const Vector& coords, double dr, double theta, const DropConfig& cfg);

struct DropData {
    SampleBatch batch;  // n x (2 * n_particles), interleaved x1,y1,x2,y2,...
    Matrix labels;      // n x 2: (delta_r, theta)
};

// Per sample: draw (delta_r, theta), place particles uniformly inside the
// rotated ellipse with a minimum spacing, then run therm_steps overdamped
// Langevin updates r -= eta * grad V + sqrt(2 eta T) xi with the per-particle
// gradient norm capped at force_cap. Deterministic per (seed, sample) stream.
DropData gen_liquid_drop(long n, const DropConfig& cfg, std::uint64_t seed);

// ---- Batch providers for training ------------------------------------------
BatchProvider spiral_batches(const SpiralConfig& cfg, long batch_size, std::uint64_t seed);
BatchProvider wave_packet_batches(const WavePacketConfig& cfg, long batch_size,
                                  std::uint64_t seed);
// Draws batches with replacement from a fixed pool of samples.
BatchProvider pool_batches(std::shared_ptr<const Matrix> pool, long batch_size,
                           std::uint64_t seed);

}  // namespace rmi
