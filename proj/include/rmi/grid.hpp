#pragma once

#include <vector>

#include "rmi/common.hpp"

namespace rmi {

// Regular histogram grid for feature values, one axis per feature dimension.
// s is the kernel width factor: the KDE kernel std is s * bin_width.
struct GridAxis {
    double lo = 0.0;
    double hi = 1.0;
    int bins = 180;
    double s = 1.0;

    double width() const { return (hi - lo) / bins; }
};

struct GridSpec {
    std::vector<GridAxis> axes;

    int dims() const { return static_cast<int>(axes.size()); }

    double cell_volume() const {
        double v = 1.0;
        for (const auto& a : axes) v *= a.width();
        return v;
    }

    void validate() const {
        if (axes.empty() || axes.size() > 2) throw ConfigError("grid must have 1 or 2 axes");
        for (const auto& a : axes) {
            if (!(a.lo < a.hi)) throw ConfigError("grid axis needs lo < hi");
            if (a.bins < 2) throw ConfigError("grid axis needs at least 2 bins");
            if (!(a.s > 0.0)) throw ConfigError("kernel width factor must be positive");
        }
    }

    bool covers(const Matrix& values) const {
        if (values.cols() != dims()) return false;
        for (int d = 0; d < dims(); ++d) {
            const auto col = values.col(d);
            if (col.minCoeff() < axes[d].lo || col.maxCoeff() > axes[d].hi) return false;
        }
        return true;
    }
};

inline int default_bins(int k) { return k == 1 ? 180 : 100; }
inline double default_kernel_factor(int k) { return k == 1 ? 1.0 : 2.0; }

// Grid bounds from data: [min - pad*range, max + pad*range] per axis.
inline GridSpec auto_grid(const Matrix& values, int bins = -1, double s = -1.0,
                          double pad = 0.1) {
    const int k = static_cast<int>(values.cols());
    if (k < 1 || k > 2) throw ConfigError("auto_grid supports 1 or 2 feature dimensions");
    GridSpec g;
    for (int d = 0; d < k; ++d) {
        GridAxis ax;
        double lo = values.col(d).minCoeff();
        double hi = values.col(d).maxCoeff();
        double range = hi - lo;
        if (range < 1e-12) range = std::max(1e-6, 1e-6 * std::abs(lo));
        ax.lo = lo - pad * range;
        ax.hi = hi + pad * range;
        ax.bins = bins > 0 ? bins : default_bins(k);
        ax.s = s > 0.0 ? s : default_kernel_factor(k);
        g.axes.push_back(ax);
    }
    g.validate();
    return g;
}

}  // namespace rmi
