#pragma once

#include "rmi/common.hpp"
#include "rmi/grid.hpp"

namespace rmi {

// KDE-smeared histogram: probabilities over grid cells (axis-0 bins as rows;
// a single column when the grid is 1D). Sums to 1: kernel tail mass beyond the
// outermost edges is folded into the end bins.
struct BinnedDensity {
    GridSpec grid;
    Eigen::ArrayXXd p;

    void validate() const;
};

// Gaussian CDF.
inline double ndtr(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// Per-sample kernel mass per bin along one axis; w has ax.bins entries summing
// to 1 (end bins absorb the tails).
void kernel_weights(double value, const GridAxis& ax, double* w);

// Derivative of kernel_weights with respect to the sample value:
// dw_k/dy = (phi(z_lo,k) - phi(z_hi,k)) / (s*width), with the outermost edges
// at +-infinity.
void kernel_weight_derivs(double value, const GridAxis& ax, double* dw);

BinnedDensity kde_binned_density(const Matrix& values, const GridSpec& grid);

double entropy_of_binned(const BinnedDensity& d);

// Convenience: KDE density + entropy in one call.
double kde_entropy(const Matrix& values, const GridSpec& grid);

// KL(P_y || G) = -H(y) + <|y|^2>/(2 sigma^2) + (K/2) ln(2 pi sigma^2),
// clamped below at the estimator noise floor -0.05.
double kl_to_gaussian(const Matrix& values, double sigma_target, const GridSpec& grid);

// Classic mutual information of two scalar series from KDE-binned histograms:
// I = H(y1) + H(y2) - H(y1,y2), clamped below at 0.
double pairwise_mi(const Vector& y1, const Vector& y2, const GridSpec& grid1,
                   const GridSpec& grid2);

}  // namespace rmi
