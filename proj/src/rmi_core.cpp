#include "rmi/rmi_core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rmi/kde.hpp"

namespace rmi {

NoiseMetric NoiseMetric::identity() { return NoiseMetric(); }

NoiseMetric NoiseMetric::constant(Matrix sigma) {
    NoiseMetric m;
    m.kind_ = Kind::constant;
    m.sigma_ = std::move(sigma);
    if (m.sigma_.rows() != m.sigma_.cols()) throw ConfigError("noise metric must be square");
    return m;
}

NoiseMetric NoiseMetric::callable(std::function<Matrix(const Vector&)> fn) {
    NoiseMetric m;
    m.kind_ = Kind::callable;
    m.fn_ = std::move(fn);
    return m;
}

Matrix NoiseMetric::at(const Vector& x) const {
    switch (kind_) {
        case Kind::identity: return Matrix::Identity(x.size(), x.size());
        case Kind::constant: return sigma_;
        case Kind::callable: return fn_(x);
    }
    throw ConfigError("invalid noise metric");
}

namespace {

void require_spd(const Matrix& m) {
    if (m.rows() != m.cols()) throw ConfigError("noise metric must be square");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw ConfigError("noise metric is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw ConfigError("noise metric is not positive-definite");
}

}  // namespace

void NoiseMetric::check_spd(const Matrix& X, int max_points) const {
    if (kind_ == Kind::identity) return;
    if (kind_ == Kind::constant) {
        require_spd(sigma_);
        return;
    }
    const long n = std::min<long>(max_points, X.rows());
    for (long i = 0; i < n; ++i) require_spd(fn_(X.row(i).transpose()));
}

double jacobian_penalty(const SampleBatch& batch, const FeatureFunction& f,
                        const NoiseMetric& metric) {
    batch.validate();
    if (f.input_dim() != batch.n_dims())
        throw ConfigError("feature input dim does not match batch dims");
    metric.check_spd(batch.data);

    const int K = f.output_dim();
    const long n = batch.n_samples();
    const Matrix J = f.jacobians(batch.data);  // (n*K) x N

    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto Ji = J.middleRows(i * K, K);
        double det = 0.0;
        if (metric.is_identity()) {
            if (K == 1) {
                det = Ji.row(0).squaredNorm();
            } else {
                const double a = Ji.row(0).squaredNorm();
                const double c = Ji.row(1).squaredNorm();
                const double b = Ji.row(0).dot(Ji.row(1));
                det = a * c - b * b;
            }
        } else {
            const Matrix sigma = metric.at(batch.data.row(i).transpose());
            const Matrix g = Ji * sigma * Ji.transpose();
            det = K == 1 ? g(0, 0) : g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
        }
        if (!(det > 1e-300))
            throw DegenerateFeatureError("degenerate feature Jacobian (det <= 1e-300)", i);
        acc += 0.5 * std::log(det);
    }
    return acc / static_cast<double>(n);
}

RmiEstimate compute_rmi(const SampleBatch& batch, const FeatureFunction& f,
                        const GridSpec& grid, const NoiseMetric& metric) {
    // Penalty first: a constant feature must surface as a degeneracy error,
    // not as a grid failure.
    RmiEstimate est;
    est.jacobian_term = jacobian_penalty(batch, f, metric);
    const Matrix y = f.values(batch.data);
    if (!grid.covers(y)) throw ConfigError("grid does not cover the feature values");
    est.entropy_term = kde_entropy(y, grid);
    est.value = est.entropy_term - est.jacobian_term;
    return est;
}

RmiEstimate compute_rmi(const SampleBatch& batch, const FeatureFunction& f,
                        const NoiseMetric& metric) {
    RmiEstimate est;
    est.jacobian_term = jacobian_penalty(batch, f, metric);
    const Matrix y = f.values(batch.data);
    est.entropy_term = kde_entropy(y, auto_grid(y));
    est.value = est.entropy_term - est.jacobian_term;
    return est;
}

namespace {

struct HistAxis {
    double lo, hi;
    int bins;
    double scale;  // bins / (hi - lo)
};

HistAxis make_axis(const Vector& v, double noise_scale, int base_bins, int cap) {
    HistAxis ax;
    ax.lo = v.minCoeff();
    ax.hi = v.maxCoeff();
    if (ax.hi - ax.lo < 1e-12) ax.hi = ax.lo + 1e-12;
    const double range = ax.hi - ax.lo;
    int b = base_bins;
    if (noise_scale > 0.0)
        b = std::max(b, static_cast<int>(std::ceil(range / (noise_scale / 2.0))));
    ax.bins = std::min(b, cap);
    ax.scale = ax.bins / range;
    return ax;
}

inline int axis_index(const HistAxis& ax, double v) {
    int k = static_cast<int>((v - ax.lo) * ax.scale);
    return std::clamp(k, 0, ax.bins - 1);
}

// Histogram MI between x (1 or 2 columns) and scalar y, with the
// Miller-Madow occupancy correction. x is treated as a single (possibly 2D)
// variable, so the correction counts occupied cells of the full joint, the
// x-marginal, and the y-marginal.
struct JointMi {
    double value;
    bool low_occupancy;
};

JointMi joint_mi(const Matrix& x, const Vector& y, const std::vector<HistAxis>& xa,
                 const HistAxis& ya) {
    const long n = y.size();
    const int d = static_cast<int>(xa.size());
    long nx = 1;
    for (const auto& a : xa) nx *= a.bins;
    std::vector<double> joint(static_cast<size_t>(nx) * ya.bins, 0.0);
    for (long i = 0; i < n; ++i) {
        long cx = axis_index(xa[0], x(i, 0));
        if (d == 2) cx = cx * xa[1].bins + axis_index(xa[1], x(i, 1));
        joint[cx * ya.bins + axis_index(ya, y(i))] += 1.0;
    }
    std::vector<double> px(nx, 0.0), py(ya.bins, 0.0);
    long m_joint = 0;
    for (long cx = 0; cx < nx; ++cx) {
        for (int cy = 0; cy < ya.bins; ++cy) {
            const double c = joint[cx * ya.bins + cy];
            if (c > 0.0) {
                ++m_joint;
                px[cx] += c;
                py[cy] += c;
            }
        }
    }
    long m_x = 0, m_y = 0;
    for (long cx = 0; cx < nx; ++cx) m_x += px[cx] > 0.0;
    for (int cy = 0; cy < ya.bins; ++cy) m_y += py[cy] > 0.0;
    const double nn = static_cast<double>(n);
    double mi = 0.0;
    for (long cx = 0; cx < nx; ++cx) {
        if (px[cx] <= 0.0) continue;
        for (int cy = 0; cy < ya.bins; ++cy) {
            const double c = joint[cx * ya.bins + cy];
            if (c > 0.0) mi += (c / nn) * std::log(c * nn / (px[cx] * py[cy]));
        }
    }
    // Miller-Madow bias correction for the plug-in MI estimate.
    mi -= (static_cast<double>(m_joint) - m_x - m_y + 1.0) / (2.0 * nn);
    JointMi out;
    out.value = mi;
    out.low_occupancy = nn / static_cast<double>(m_joint) < 5.0;
    return out;
}

// Bin-count base: ceil(n^(1/(d+2))) with d = joint dimensionality.
int base_bins(long n, int joint_dims) {
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 1.0 / (joint_dims + 2))));
}

double rms_jacobian_norm(const SampleBatch& batch, const FeatureFunction& f) {
    const Matrix J = f.jacobians(batch.data);
    return std::sqrt(J.rowwise().squaredNorm().mean());
}

}  // namespace

EpsilonEstimate compute_rmi_epsilon(const SampleBatch& batch, const FeatureFunction& f,
                                    double epsilon, long n_noise_draws,
                                    std::uint64_t seed) {
    batch.validate();
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (batch.n_dims() > 2)
        throw ConfigError("compute_rmi_epsilon is restricted to n_dims <= 2");
    if (f.output_dim() != 1) throw ConfigError("compute_rmi_epsilon requires K = 1");
    if (n_noise_draws < 1) throw ConfigError("need at least one noise draw");

    const long n = batch.n_samples();
    const int N = static_cast<int>(batch.n_dims());
    const long total = n * n_noise_draws;

    Matrix xr(total, N);
    Vector y(total);
    for (long i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        for (long r = 0; r < n_noise_draws; ++r) {
            Vector xi = batch.data.row(i).transpose();
            Vector noisy = xi;
            for (int dimension = 0; dimension < N; ++dimension)
                noisy(dimension) += epsilon * rng.normal();
            const long row = i * n_noise_draws + r;
            xr.row(row) = xi.transpose();
            y(row) = f.value(noisy)(0);
        }
    }

    const int d = N + 1;
    const int base = base_bins(total, d);
    const int cap = N == 1 ? 600 : 100;
    std::vector<HistAxis> xa;
    for (int dimension = 0; dimension < N; ++dimension)
        xa.push_back(make_axis(xr.col(dimension), epsilon, base, cap));
    // The y-axis noise scale is eps times the typical feature gradient norm.
    const double eps_y = epsilon * rms_jacobian_norm(batch, f);
    const HistAxis ya = make_axis(y, eps_y, base, cap);

    const JointMi mi = joint_mi(xr, y, xa, ya);
    const double h_eps = 0.5 * std::log(2.0 * M_PI * M_E * epsilon * epsilon);
    EpsilonEstimate out;
    out.value = mi.value + h_eps;
    out.low_occupancy = mi.low_occupancy;
    return out;
}

InequalityGap inequality_gap(const SampleBatch& batch,
                             std::shared_ptr<const FeatureFunction> f1,
                             std::shared_ptr<const FeatureFunction> f2,
                             const GridSpec& joint_grid) {
    PairFeature joint(f1, f2);
    const RmiEstimate lhs = compute_rmi(batch, joint, joint_grid);

    const Matrix y1 = f1->values(batch.data);
    const Matrix y2 = f2->values(batch.data);
    const RmiEstimate r1 = compute_rmi(batch, *f1, auto_grid(y1));
    const RmiEstimate r2 = compute_rmi(batch, *f2, auto_grid(y2));
    const double mi = pairwise_mi(y1.col(0), y2.col(0), auto_grid(y1), auto_grid(y2));

    InequalityGap out;
    out.lhs_joint = lhs.value;
    out.rhs = r1.value + r2.value - mi;
    out.gap = out.lhs_joint - out.rhs;
    return out;
}

InequalityGap inequality_gap(const SampleBatch& batch,
                             std::shared_ptr<const FeatureFunction> f1,
                             std::shared_ptr<const FeatureFunction> f2) {
    PairFeature joint(f1, f2);
    const Matrix yj = joint.values(batch.data);
    return inequality_gap(batch, f1, f2, auto_grid(yj));
}

InformationLossResult information_loss_identity(const SampleBatch& batch,
                                                const FeatureFunction& f, double epsilon,
                                                const GridSpec& grid,
                                                std::uint64_t seed) {
    batch.validate();
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (batch.n_dims() > 2)
        throw ConfigError("information_loss_identity is restricted to n_dims <= 2");
    if (f.output_dim() != 1) throw ConfigError("information_loss_identity requires K = 1");

    const long n = batch.n_samples();
    const int N = static_cast<int>(batch.n_dims());

    // Input-noise channel y = f(x + eps*lambda) and output-noise channel
    // y = f(x) + eps*lambda share the noise stream for variance reduction.
    Vector y_in(n), y_out(n);
    const Matrix y0 = f.values(batch.data);
    for (long i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        Vector noisy = batch.data.row(i).transpose();
        for (int dimension = 0; dimension < N; ++dimension)
            noisy(dimension) += epsilon * rng.normal();
        y_in(i) = f.value(noisy)(0);
        y_out(i) = y0(i, 0) + epsilon * rng.normal();
    }

    const int d = N + 1;
    const int base = base_bins(n, d);
    const int cap = N == 1 ? 600 : 100;
    std::vector<HistAxis> xa;
    for (int dimension = 0; dimension < N; ++dimension)
        xa.push_back(make_axis(batch.data.col(dimension), epsilon, base, cap));
    const double eps_y = epsilon * rms_jacobian_norm(batch, f);
    const HistAxis ya_in = make_axis(y_in, eps_y, base, cap);
    const HistAxis ya_out = make_axis(y_out, epsilon, base, cap);

    const double mi_in = joint_mi(batch.data, y_in, xa, ya_in).value;
    const double mi_out = joint_mi(batch.data, y_out, xa, ya_out).value;

    InformationLossResult out;
    out.rmi = compute_rmi(batch, f, grid).value;
    out.reconstructed = kde_entropy(y0, grid) + (mi_in - mi_out);
    return out;
}

std::shared_ptr<LinearFeature> pca_fit(const SampleBatch& batch, int k) {
    batch.validate();
    if (k < 1 || k > batch.n_dims()) throw ConfigError("pca_fit: invalid component count");
    if (batch.n_samples() < 2) throw ConfigError("pca_fit: need at least two samples");
    const Matrix& X = batch.data;
    const Vector mean = X.colwise().mean();
    Matrix centered = X.rowwise() - mean.transpose();
    const Matrix cov =
        (centered.transpose() * centered) / static_cast<double>(X.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (es.info() != Eigen::Success) throw ConfigError("pca_fit: eigensolver failed");

    Matrix W(k, X.cols());
    for (int c = 0; c < k; ++c) {
        Vector v = es.eigenvectors().col(X.cols() - 1 - c);  // descending eigenvalues
        int arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        W.row(c) = v.transpose();
    }
    return std::make_shared<LinearFeature>(W);
}

}  // namespace rmi
