#include "rmi/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rmi {

void BinnedDensity::validate() const {
    grid.validate();
    if ((p < 0.0).any()) throw ConfigError("binned density has negative entries");
    if (std::abs(p.sum() - 1.0) > 1e-9) throw ConfigError("binned density does not sum to 1");
}

void kernel_weights(double value, const GridAxis& ax, double* w) {
    const int m = ax.bins;
    const double sd = ax.s * ax.width();
    // CDF at the m-1 interior edges; outermost edges act as -inf / +inf.
    double prev = 0.0;
    for (int k = 0; k < m - 1; ++k) {
        const double edge = ax.lo + (k + 1) * ax.width();
        const double c = ndtr((edge - value) / sd);
        w[k] = c - prev;
        prev = c;
    }
    w[m - 1] = 1.0 - prev;
}

void kernel_weight_derivs(double value, const GridAxis& ax, double* dw) {
    const int m = ax.bins;
    const double sd = ax.s * ax.width();
    const double inv = 1.0 / (sd * std::sqrt(2.0 * M_PI));
    // dw_k/dy = phi(lo edge) - phi(hi edge), scaled; tails have phi = 0.
    double prev = 0.0;  // pdf at the bin's lower edge
    for (int k = 0; k < m - 1; ++k) {
        const double edge = ax.lo + (k + 1) * ax.width();
        const double z = (edge - value) / sd;
        const double cur = inv * std::exp(-0.5 * z * z);
        dw[k] = prev - cur;
        prev = cur;
    }
    dw[m - 1] = prev;
}

namespace {

// Canonical (lexicographically sorted) sample order, so the accumulated
// density is bitwise independent of input sample order.
std::vector<int> canonical_order(const Matrix& values) {
    std::vector<int> idx(values.rows());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        for (int d = 0; d < values.cols(); ++d) {
            if (values(a, d) != values(b, d)) return values(a, d) < values(b, d);
        }
        return false;
    });
    return idx;
}

}  // namespace

BinnedDensity kde_binned_density(const Matrix& values, const GridSpec& grid) {
    grid.validate();
    if (values.rows() < 1) throw ConfigError("kde_binned_density needs at least one sample");
    if (values.cols() != grid.dims())
        throw ConfigError("kde_binned_density: value dims do not match grid dims");
    if (!grid.covers(values))
        throw ConfigError("kde_binned_density: values fall outside the grid bounds");

    const long n = values.rows();
    const std::vector<int> order = canonical_order(values);

    BinnedDensity out;
    out.grid = grid;
    if (grid.dims() == 1) {
        const GridAxis& ax = grid.axes[0];
        out.p = Eigen::ArrayXXd::Zero(ax.bins, 1);
        std::vector<double> w(ax.bins);
        for (int i : order) {
            kernel_weights(values(i, 0), ax, w.data());
            for (int k = 0; k < ax.bins; ++k) out.p(k, 0) += w[k];
        }
    } else {
        const GridAxis& axa = grid.axes[0];
        const GridAxis& axb = grid.axes[1];
        out.p = Eigen::ArrayXXd::Zero(axa.bins, axb.bins);
        // Chunked accumulation via GEMM: P += Wa^T * Wb over fixed-size chunks.
        // Row-major buffers so each sample's weights are written contiguously.
        using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        constexpr long kChunk = 4096;
        RowMajor wa(kChunk, axa.bins), wb(kChunk, axb.bins);
        Matrix acc = Matrix::Zero(axa.bins, axb.bins);
        long filled = 0;
        for (int i : order) {
            kernel_weights(values(i, 0), axa, wa.row(filled).data());
            kernel_weights(values(i, 1), axb, wb.row(filled).data());
            if (++filled == kChunk) {
                acc.noalias() += wa.transpose() * wb;
                filled = 0;
            }
        }
        if (filled > 0)
            acc.noalias() += wa.topRows(filled).transpose() * wb.topRows(filled);
        out.p = acc.array();
    }
    out.p /= static_cast<double>(n);
    return out;
}

double entropy_of_binned(const BinnedDensity& d) {
    const double vol = d.grid.cell_volume();
    double h = 0.0;
    const double* p = d.p.data();
    const long cells = d.p.size();
    for (long i = 0; i < cells; ++i) {
        if (p[i] > 0.0) h -= p[i] * std::log(p[i] / vol);
    }
    return h;
}

double kde_entropy(const Matrix& values, const GridSpec& grid) {
    return entropy_of_binned(kde_binned_density(values, grid));
}

double kl_to_gaussian(const Matrix& values, double sigma_target, const GridSpec& grid) {
    if (!(sigma_target > 0.0)) throw ConfigError("sigma_target must be positive");
    const double h = kde_entropy(values, grid);
    const long n = values.rows();
    const int k = static_cast<int>(values.cols());
    double sq = 0.0;
    for (long i = 0; i < n; ++i) sq += values.row(i).squaredNorm();
    sq /= static_cast<double>(n);
    const double kl = -h + sq / (2.0 * sigma_target * sigma_target) +
                      0.5 * k * std::log(2.0 * M_PI * sigma_target * sigma_target);
    return std::max(kl, -0.05);
}

double pairwise_mi(const Vector& y1, const Vector& y2, const GridSpec& grid1,
                   const GridSpec& grid2) {
    if (y1.size() != y2.size()) throw ConfigError("pairwise_mi: length mismatch");
    if (grid1.dims() != 1 || grid2.dims() != 1)
        throw ConfigError("pairwise_mi grids must be 1D");
    const double h1 = kde_entropy(y1, grid1);
    const double h2 = kde_entropy(y2, grid2);
    Matrix joint(y1.size(), 2);
    joint.col(0) = y1;
    joint.col(1) = y2;
    GridSpec jg;
    jg.axes = {grid1.axes[0], grid2.axes[0]};
    const double hj = kde_entropy(joint, jg);
    return std::max(0.0, h1 + h2 - hj);
}

}  // namespace rmi
