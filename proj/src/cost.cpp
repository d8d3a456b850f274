#include "rmi/cost.hpp"

#include <cmath>

#include "rmi/kde.hpp"

namespace rmi {

MlpGrads zero_grads(const MlpParams& params) {
    MlpGrads g;
    for (const auto& layer : params.layers) {
        g.dW.emplace_back(Matrix::Zero(layer.W.rows(), layer.W.cols()));
        g.db.emplace_back(Vector::Zero(layer.b.size()));
    }
    return g;
}

namespace {

// Kernel weights (and optionally their value-derivatives) for every sample of
// one scalar series, as bins x n matrices so that densities and gradient
// contractions are plain GEMMs.
void weight_matrix(const Eigen::Ref<const Eigen::RowVectorXd>& y, const GridAxis& ax,
                   Matrix& W, Matrix* dW) {
    const long n = y.size();
    W.resize(ax.bins, n);
    if (dW) dW->resize(ax.bins, n);
    std::vector<double> buf(ax.bins);
    for (long s = 0; s < n; ++s) {
        kernel_weights(y(s), ax, buf.data());
        for (int k = 0; k < ax.bins; ++k) W(k, s) = buf[k];
        if (dW) {
            kernel_weight_derivs(y(s), ax, buf.data());
            for (int k = 0; k < ax.bins; ++k) (*dW)(k, s) = buf[k];
        }
    }
}

GridSpec resolve_grid(const Matrix& Y, const CostWeights& w, const GridSpec* grid) {
    if (grid) {
        grid->validate();
        if (grid->dims() != Y.rows())
            throw ConfigError("grid dimensionality does not match feature output");
        return *grid;
    }
    return auto_grid(Y.transpose(), w.grid_bins, w.kernel_factor);
}

}  // namespace

double kde_entropy_gradient(const Matrix& Y, const GridSpec& grid, Matrix& dH_dy) {
    const int K = static_cast<int>(Y.rows());
    const long n = Y.cols();
    if (grid.dims() != K) throw ConfigError("grid dimensionality does not match outputs");
    if (n < 1) throw ConfigError("need at least one sample");
    const double inv_n = 1.0 / static_cast<double>(n);
    dH_dy.resize(K, n);

    if (K == 1) {
        const GridAxis& ax = grid.axes[0];
        Matrix W, dW;
        weight_matrix(Y.row(0), ax, W, &dW);
        Vector p = W.rowwise().mean();
        const double width = ax.width();
        double H = 0.0;
        Vector L = Vector::Zero(ax.bins);
        for (int k = 0; k < ax.bins; ++k) {
            if (p(k) > 0.0) {
                const double lp = std::log(p(k) / width);
                H -= p(k) * lp;
                L(k) = lp + 1.0;
            }
        }
        dH_dy.row(0).noalias() = -inv_n * (L.transpose() * dW);
        return H;
    }

    const GridAxis& ax_a = grid.axes[0];
    const GridAxis& ax_b = grid.axes[1];
    Matrix Wa, dWa, Wb, dWb;
    weight_matrix(Y.row(0), ax_a, Wa, &dWa);
    weight_matrix(Y.row(1), ax_b, Wb, &dWb);
    Matrix P = inv_n * (Wa * Wb.transpose());  // ma x mb
    const double vol = grid.cell_volume();
    double H = 0.0;
    Matrix L = Matrix::Zero(P.rows(), P.cols());
    for (long i = 0; i < P.rows(); ++i) {
        for (long j = 0; j < P.cols(); ++j) {
            if (P(i, j) > 0.0) {
                const double lp = std::log(P(i, j) / vol);
                H -= P(i, j) * lp;
                L(i, j) = lp + 1.0;
            }
        }
    }
    // dH/dy1_s = -(1/n) dwa_s . (L wb_s);  dH/dy2_s = -(1/n) dwb_s . (L^T wa_s)
    Matrix M1 = L * Wb;            // ma x n
    Matrix M2 = L.transpose() * Wa;  // mb x n
    dH_dy.row(0) = -inv_n * (dWa.array() * M1.array()).colwise().sum();
    dH_dy.row(1) = -inv_n * (dWb.array() * M2.array()).colwise().sum();
    return H;
}

namespace {

struct JacobianTerms {
    double jac_term = 0.0;  // <ln sqrt det JJ^T>
    double grad_pen = 0.0;  // <||J||_F>
    // Per output row k: N x n matrix whose column s is row k of
    // U_s = (1/n) (G_s^{-1} J_s + a_eff J_s / ||J_s||_F).
    std::vector<Matrix> U;
};

using RowArray = Eigen::Array<double, 1, Eigen::Dynamic>;

[[noreturn]] void throw_degenerate(const RowArray& det) {
    long s = 0;
    while (s < det.size() && det(s) > 1e-300) ++s;
    throw DegenerateFeatureError("degenerate feature Jacobian (det <= 1e-300)", s);
}

JacobianTerms jacobian_terms(const std::vector<Matrix>& Jt, long n, double a_eff) {
    const int K = static_cast<int>(Jt.size());
    JacobianTerms t;
    t.U.resize(K);
    const double inv_n = 1.0 / static_cast<double>(n);
    const RowArray a = Jt[0].array().square().colwise().sum();
    if (K == 1) {
        if (!(a > 1e-300).all()) throw_degenerate(a);
        t.jac_term = 0.5 * inv_n * a.log().sum();
        const RowArray fro = a.sqrt();
        t.grad_pen = inv_n * fro.sum();
        const RowArray coef = inv_n * (a.inverse() + a_eff / fro);
        t.U[0] = (Jt[0].array().rowwise() * coef).matrix();
        return t;
    }
    const RowArray c = Jt[1].array().square().colwise().sum();
    const RowArray b = (Jt[0].array() * Jt[1].array()).colwise().sum();
    const RowArray det = a * c - b * b;
    if (!(det > 1e-300).all()) throw_degenerate(det);
    t.jac_term = 0.5 * inv_n * det.log().sum();
    const RowArray fro = (a + c).sqrt();
    t.grad_pen = inv_n * fro.sum();
    // G^{-1} = [[c, -b], [-b, a]] / det, plus the a_eff J / ||J||_F pull.
    const RowArray r = a_eff / fro;
    const RowArray c00 = inv_n * (c / det + r);
    const RowArray c01 = inv_n * (-b / det);
    const RowArray c11 = inv_n * (a / det + r);
    t.U[0] = (Jt[0].array().rowwise() * c00 + Jt[1].array().rowwise() * c01).matrix();
    t.U[1] = (Jt[0].array().rowwise() * c01 + Jt[1].array().rowwise() * c11).matrix();
    return t;
}

CostTerms assemble_terms(double H, const JacobianTerms& jt, const Matrix& Y,
                         const CostWeights& w) {
    const int K = static_cast<int>(Y.rows());
    const long n = Y.cols();
    CostTerms out;
    out.entropy = H;
    out.jacobian_term = jt.jac_term;
    out.rmi = H - jt.jac_term;
    out.grad_pen = jt.grad_pen;
    const double msq = Y.squaredNorm() / static_cast<double>(n);
    const double s2 = w.sigma_target * w.sigma_target;
    out.kl_raw = -H + msq / (2.0 * s2) + 0.5 * K * std::log(2.0 * M_PI * s2);
    out.kl = std::max(out.kl_raw, -0.05);
    out.cost = -out.rmi + w.a_eff * out.grad_pen + w.b_kl * out.kl_raw;
    return out;
}

}  // namespace

CostTerms total_cost(const MlpParams& params, const Matrix& X, const CostWeights& w,
                     const GridSpec* grid) {
    params.validate();
    if (X.cols() != params.layers.front().W.cols())
        throw ConfigError("batch dimensionality does not match network input");
    const long n = X.rows();
    if (n < 2) throw ConfigError("need at least two samples");
    const MlpForward fwd = mlp_forward(params, X.transpose());
    const Matrix& Y = fwd.output();
    const std::vector<Matrix> Jt = mlp_jacobians_split(params, fwd);
    const JacobianTerms jt = jacobian_terms(Jt, n, w.a_eff);
    const GridSpec g = resolve_grid(Y, w, grid);
    const double H = kde_entropy(Y.transpose(), g);
    CostTerms terms = assemble_terms(H, jt, Y, w);
    terms.grid_used = g;
    return terms;
}

CostTerms cost_gradient(const MlpParams& params, const Matrix& X, const CostWeights& w,
                        MlpGrads& grads, const GridSpec* grid) {
    params.validate();
    if (X.cols() != params.layers.front().W.cols())
        throw ConfigError("batch dimensionality does not match network input");
    const long n = X.rows();
    if (n < 2) throw ConfigError("need at least two samples");
    const long N = X.cols();
    const std::size_t L = params.layers.size();

    const MlpForward fwd = mlp_forward(params, X.transpose());
    const Matrix& Y = fwd.output();
    const std::vector<Matrix> Jt = mlp_jacobians_split(params, fwd);
    const JacobianTerms jt = jacobian_terms(Jt, n, w.a_eff);

    const GridSpec g = resolve_grid(Y, w, grid);
    Matrix dH_dy;
    const double H = kde_entropy_gradient(Y, g, dH_dy);
    CostTerms terms = assemble_terms(H, jt, Y, w);
    terms.grid_used = g;

    grads = zero_grads(params);
    const std::vector<Matrix> seeds = jacobian_cotangent_grads(params, fwd, jt.U, grads);

    // Entropy/KL pull on y: dC/dy_s = -(1 + b_kl) dH/dy_s + b_kl y_s / (n sigma^2)
    const double s2 = w.sigma_target * w.sigma_target;
    Matrix delta = (-(1.0 + w.b_kl)) * dH_dy +
                   (w.b_kl / (static_cast<double>(n) * s2)) * Y;
    backprop_delta(params, fwd, std::move(delta), seeds.empty() ? nullptr : &seeds,
                   grads);
    return terms;
}

std::vector<Matrix> jacobian_cotangent_grads(const MlpParams& params,
                                             const MlpForward& fwd,
                                             const std::vector<Matrix>& U,
                                             MlpGrads& grads) {
    const std::size_t L = params.layers.size();
    const int K = static_cast<int>(U.size());
    const long n = fwd.Z[0].cols();

    // With J_s = W_L D_{L-1,s} ... D_{1,s} W_1 and a per-sample cotangent U_s,
    // d/dW of sum_s tr(U_s^T J_s) splits into "direct" products of a top-down
    // chain TT (carrying W_L..W_{l+1} with the D's) against a bottom-up chain
    // V (carrying W_1..W_{l-1} applied to U), plus an activation-curvature
    // seed Gamma_l = act''(a_l) . sum_k TTpre_l . Vpre_l that backpropagates
    // like an ordinary delta. Only tanh layers carry curvature; their seeds
    // are the only S entries allocated (the rest stay empty and are skipped).
    std::vector<Matrix> S(L >= 1 ? L - 1 : 0);
    bool any_curvature = false;
    for (std::size_t j = 0; j + 1 < L; ++j)
        if (params.layers[j].act == Activation::tanh_fn) {
            S[j] = Matrix::Zero(fwd.D[j].rows(), n);
            any_curvature = true;
        }

    // Chain buffers hoisted out of the k loop so Eigen reuses their storage.
    std::vector<Matrix> tt(L >= 1 ? L - 1 : 0), ttpre(L >= 1 ? L - 1 : 0);
    std::vector<Matrix> vhid(L >= 1 ? L - 1 : 0), vpre(L >= 1 ? L - 1 : 0);

    for (int k = 0; k < K; ++k) {
        const Matrix& U_k = U[k];  // N x n
        if (L == 1) {
            grads.dW[0].row(k) += U_k.rowwise().sum().transpose();
            continue;
        }
        // Top-down chains. TTpre at the last hidden layer is W_L.row(k)
        // replicated across samples; it is folded into the scalings below
        // instead of being materialized.
        const auto wk = params.layers[L - 1].W.row(k).transpose();
        tt[L - 2] = fwd.D[L - 2].array().colwise() * wk.array();
        for (std::size_t j = L - 2; j >= 1; --j) {
            ttpre[j - 1].noalias() = params.layers[j].W.transpose() * tt[j];
            tt[j - 1] = ttpre[j - 1].cwiseProduct(fwd.D[j - 1]);
        }
        // Bottom-up chains.
        vpre[0].noalias() = params.layers[0].W * U_k;
        vhid[0] = vpre[0].cwiseProduct(fwd.D[0]);
        for (std::size_t j = 1; j + 1 < L; ++j) {
            vpre[j].noalias() = params.layers[j].W * vhid[j - 1];
            vhid[j] = vpre[j].cwiseProduct(fwd.D[j]);
        }
        // Direct gradient pieces.
        grads.dW[0].noalias() += tt[0] * U_k.transpose();
        for (std::size_t j = 1; j + 1 < L; ++j)
            grads.dW[j].noalias() += tt[j] * vhid[j - 1].transpose();
        grads.dW[L - 1].row(k) += vhid[L - 2].rowwise().sum().transpose();
        // Curvature seed accumulation (tanh layers only).
        for (std::size_t j = 0; j + 1 < L; ++j) {
            if (S[j].size() == 0) continue;
            if (j == L - 2)
                S[j].array() += vpre[j].array().colwise() * wk.array();
            else
                S[j].array() += ttpre[j].array() * vpre[j].array();
        }
    }
    if (!any_curvature) return {};

    // Convert the accumulated TTpre .* Vpre sums into delta-sweep seeds:
    // tanh''(a) = -2 z d.
    for (std::size_t j = 0; j + 1 < L; ++j)
        if (S[j].size() != 0)
            S[j] = (-2.0 * fwd.Z[j + 1].array() * fwd.D[j].array() * S[j].array())
                       .matrix();
    return S;
}

Matrix backprop_delta(const MlpParams& params, const MlpForward& fwd, Matrix delta,
                      const std::vector<Matrix>* seeds, MlpGrads& grads,
                      bool input_grad) {
    const std::size_t L = params.layers.size();
    for (std::size_t li = L; li > 0; --li) {
        const std::size_t l = li - 1;
        if (l < L - 1) {
            delta = (params.layers[l + 1].W.transpose() * delta).cwiseProduct(fwd.D[l]);
            if (seeds && !seeds->empty() && (*seeds)[l].size() != 0) delta += (*seeds)[l];
        }
        grads.dW[l].noalias() += delta * fwd.Z[l].transpose();
        grads.db[l] += delta.rowwise().sum();
    }
    if (!input_grad) return {};
    return params.layers[0].W.transpose() * delta;
}

}  // namespace rmi
