#include "rmi/features.hpp"

namespace rmi {

Matrix FeatureFunction::values(const Matrix& X) const {
    Matrix Y(X.rows(), output_dim());
    for (long i = 0; i < X.rows(); ++i) {
        try {
            Y.row(i) = value(X.row(i).transpose()).transpose();
        } catch (const DegenerateFeatureError& e) {
            throw DegenerateFeatureError(e.what(), i);
        }
    }
    return Y;
}

Matrix FeatureFunction::jacobians(const Matrix& X) const {
    const int k = output_dim();
    Matrix J(X.rows() * k, input_dim());
    for (long i = 0; i < X.rows(); ++i) {
        try {
            J.middleRows(i * k, k) = jacobian(X.row(i).transpose());
        } catch (const DegenerateFeatureError& e) {
            throw DegenerateFeatureError(e.what(), i);
        }
    }
    return J;
}

HandcraftedKind handcrafted_kind_from_name(const std::string& name) {
    if (name == "mean" || name == "mean_field") return HandcraftedKind::mean_field;
    if (name == "jx" || name == "amp_weighted_pos") return HandcraftedKind::amp_weighted_pos;
    if (name == "jx2" || name == "int_weighted_pos") return HandcraftedKind::int_weighted_pos;
    if (name == "fE" || name == "normalized_int_pos") return HandcraftedKind::normalized_int_pos;
    if (name == "fvar" || name == "f_var") return HandcraftedKind::f_var;
    if (name == "fcorr" || name == "f_corr") return HandcraftedKind::f_corr;
    throw ConfigError("unknown handcrafted feature: " + name);
}

std::string handcrafted_kind_name(HandcraftedKind kind) {
    switch (kind) {
        case HandcraftedKind::mean_field: return "mean_field";
        case HandcraftedKind::amp_weighted_pos: return "amp_weighted_pos";
        case HandcraftedKind::int_weighted_pos: return "int_weighted_pos";
        case HandcraftedKind::normalized_int_pos: return "normalized_int_pos";
        case HandcraftedKind::f_var: return "f_var";
        case HandcraftedKind::f_corr: return "f_corr";
    }
    throw ConfigError("unknown handcrafted kind");
}

HandcraftedFeature::HandcraftedFeature(HandcraftedKind kind, int input_dim)
    : kind_(kind), n_(input_dim) {
    if (n_ < 1) throw ConfigError("handcrafted feature needs input_dim >= 1");
    const bool particle = kind == HandcraftedKind::f_var || kind == HandcraftedKind::f_corr;
    if (particle && n_ % 2 != 0)
        throw ConfigError("particle features need an even input_dim (interleaved coords)");
    k_ = particle ? 2 : 1;
}

Vector HandcraftedFeature::value(const Vector& x) const {
    if (x.size() != n_) throw ConfigError("handcrafted feature: input dim mismatch");
    Vector y(k_);
    switch (kind_) {
        case HandcraftedKind::mean_field:
            y(0) = x.mean();
            break;
        case HandcraftedKind::amp_weighted_pos: {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) acc += (j + 1) * x(j);
            y(0) = acc / n_;
            break;
        }
        case HandcraftedKind::int_weighted_pos: {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) acc += (j + 1) * x(j) * x(j);
            y(0) = acc / n_;
            break;
        }
        case HandcraftedKind::normalized_int_pos: {
            double num = 0.0, den = 0.0;
            for (int j = 0; j < n_; ++j) {
                num += (j + 1) * x(j) * x(j);
                den += x(j) * x(j);
            }
            if (den <= 0.0)
                throw DegenerateFeatureError("f_E undefined: zero total intensity", -1);
            y(0) = num / den;
            break;
        }
        case HandcraftedKind::f_var: {
            const int m = n_ / 2;
            double s1 = 0.0, s2 = 0.0;
            for (int j = 0; j < m; ++j) {
                s1 += x(2 * j) * x(2 * j);
                s2 += x(2 * j + 1) * x(2 * j + 1);
            }
            y(0) = s1 / m;
            y(1) = s2 / m;
            break;
        }
        case HandcraftedKind::f_corr: {
            const int m = n_ / 2;
            double s1 = 0.0, s12 = 0.0;
            for (int j = 0; j < m; ++j) {
                s1 += x(2 * j) * x(2 * j);
                s12 += x(2 * j) * x(2 * j + 1);
            }
            y(0) = s1 / m;
            y(1) = s12 / m;
            break;
        }
    }
    return y;
}

Matrix HandcraftedFeature::jacobian(const Vector& x) const {
    if (x.size() != n_) throw ConfigError("handcrafted feature: input dim mismatch");
    Matrix j = Matrix::Zero(k_, n_);
    switch (kind_) {
        case HandcraftedKind::mean_field:
            j.row(0).setConstant(1.0 / n_);
            break;
        case HandcraftedKind::amp_weighted_pos:
            for (int p = 0; p < n_; ++p) j(0, p) = static_cast<double>(p + 1) / n_;
            break;
        case HandcraftedKind::int_weighted_pos:
            for (int p = 0; p < n_; ++p) j(0, p) = 2.0 * (p + 1) * x(p) / n_;
            break;
        case HandcraftedKind::normalized_int_pos: {
            double num = 0.0, den = 0.0;
            for (int p = 0; p < n_; ++p) {
                num += (p + 1) * x(p) * x(p);
                den += x(p) * x(p);
            }
            if (den <= 0.0)
                throw DegenerateFeatureError("f_E undefined: zero total intensity", -1);
            const double f = num / den;
            for (int p = 0; p < n_; ++p) j(0, p) = 2.0 * x(p) * ((p + 1) - f) / den;
            break;
        }
        case HandcraftedKind::f_var: {
            const int m = n_ / 2;
            for (int p = 0; p < m; ++p) {
                j(0, 2 * p) = 2.0 * x(2 * p) / m;
                j(1, 2 * p + 1) = 2.0 * x(2 * p + 1) / m;
            }
            break;
        }
        case HandcraftedKind::f_corr: {
            const int m = n_ / 2;
            for (int p = 0; p < m; ++p) {
                j(0, 2 * p) = 2.0 * x(2 * p) / m;
                j(1, 2 * p) = x(2 * p + 1) / m;
                j(1, 2 * p + 1) = x(2 * p) / m;
            }
            break;
        }
    }
    return j;
}

}  // namespace rmi
