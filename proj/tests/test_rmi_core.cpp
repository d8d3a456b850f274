// Tests for the estimator core: the Jacobian penalty, the renormalized
// mutual information on closed-form cases, the epsilon-noise estimator, the
// additivity inequality, the information-loss identity, and the PCA baseline.
#include <cmath>
#include <memory>

#include "doctest.h"
#include "rmi/datasets.hpp"
#include "rmi/kde.hpp"
#include "rmi/mlp.hpp"
#include "rmi/rmi_core.hpp"
#include "rmi/rng.hpp"

using namespace rmi;

namespace {

constexpr double kGaussEntropy = 1.4189385332046727;  // 0.5 ln(2 pi e)

SampleBatch gaussian_batch_1d(long n, std::uint64_t seed) {
    SampleBatch b;
    b.data.resize(n, 1);
    Rng rng(seed);
    for (long i = 0; i < n; ++i) b.data(i, 0) = rng.normal();
    return b;
}

SampleBatch correlated_gaussian(long n, std::uint64_t seed) {
    SpiralConfig cfg;
    cfg.alpha = 0.0;  // no twist: plain zero-mean Gaussian with the 2x2 covariance
    return gen_spiral(n, cfg, seed);
}

std::shared_ptr<LinearFeature> weight_feature(std::initializer_list<double> w) {
    Matrix W(1, static_cast<long>(w.size()));
    long j = 0;
    for (double v : w) W(0, j++) = v;
    return std::make_shared<LinearFeature>(W);
}

}  // namespace

TEST_SUITE("rmi_core") {

TEST_CASE("jacobian penalty closed forms") {
    const SampleBatch batch = correlated_gaussian(500, 41);

    SUBCASE("identity map has zero penalty") {
        const LinearFeature ident(Matrix::Identity(2, 2));
        CHECK(jacobian_penalty(batch, ident) == 0.0);
    }
    SUBCASE("constant-gradient scalar feature gives ln of the gradient norm") {
        const auto f = weight_feature({3.0, 4.0});
        CHECK(jacobian_penalty(batch, *f) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
    }
    SUBCASE("a noise metric rescales the determinant") {
        // w^T Sigma w = 0.6^2 * 1 + 1.6^2 * 0.25 = 1, so the penalty vanishes.
        const auto f = weight_feature({0.6, 1.6});
        Matrix sigma = Matrix::Zero(2, 2);
        sigma(0, 0) = 1.0;
        sigma(1, 1) = 0.25;
        const double pen = jacobian_penalty(batch, *f, NoiseMetric::constant(sigma));
        CHECK(pen == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(pen) < 1e-12);
    }
}

TEST_CASE("jacobian penalty of a network matches the direct per-sample formula") {
    const SampleBatch batch = correlated_gaussian(200, 7);
    for (int K : {1, 2}) {
        Rng rng(77 + K);
        const MlpParams params = mlp_init({2, 7, K}, Activation::tanh_fn, rng);
        const MlpFeature f(params);
        const Matrix J = f.jacobians(batch.data);
        double acc = 0.0;
        for (long i = 0; i < batch.n_samples(); ++i) {
            const Matrix Ji = J.middleRows(i * K, K);
            const Matrix g = Ji * Ji.transpose();
            acc += 0.5 * std::log(g.determinant());
        }
        acc /= static_cast<double>(batch.n_samples());
        CHECK(jacobian_penalty(batch, f) == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("rmi of the identity on a standard Gaussian is the Gaussian entropy") {
    const SampleBatch batch = gaussian_batch_1d(100000, 3);
    const auto f = weight_feature({1.0});
    const RmiEstimate est = compute_rmi(batch, *f);
    CHECK(est.jacobian_term == 0.0);
    CHECK(est.value == doctest::Approx(kGaussEntropy).epsilon(0.02));
}

TEST_CASE("rmi of the first-coordinate projection matches the closed form") {
    // Var(x1) = 0.64 under the pinned 2x2 covariance, so the projection's
    // renormalized information is 0.5 ln(2 pi e * 0.64) = 1.19580.
    const SampleBatch batch = correlated_gaussian(100000, 2024);
    const auto f = weight_feature({1.0, 0.0});
    const RmiEstimate est = compute_rmi(batch, *f);
    CHECK(est.value == doctest::Approx(1.1957949).epsilon(0.02));
}

TEST_CASE("rmi is invariant under rescaling the feature") {
    const SampleBatch batch = correlated_gaussian(20000, 15);
    const auto f1 = weight_feature({1.0, 0.0});
    const auto f2 = weight_feature({2.0, 0.0});
    const RmiEstimate a = compute_rmi(batch, *f1);
    const RmiEstimate b = compute_rmi(batch, *f2);
    // Both decomposition terms shift by ln 2 and the shifts cancel.
    CHECK(b.jacobian_term == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(b.entropy_term - a.entropy_term == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-9));
}

TEST_CASE("a constant feature raises a degeneracy error naming the sample") {
    const SampleBatch batch = correlated_gaussian(100, 5);
    const auto f = weight_feature({0.0, 0.0});
    bool threw = false;
    try {
        compute_rmi(batch, *f);
    } catch (const DegenerateFeatureError& err) {
        threw = true;
        CHECK(err.sample == 0);
    }
    CHECK(threw);
}

TEST_CASE("an explicit grid that misses feature values is rejected") {
    const SampleBatch batch = correlated_gaussian(1000, 6);
    const auto f = weight_feature({1.0, 0.0});
    GridSpec tiny;
    tiny.axes.push_back({-0.01, 0.01, 50, 1.0});
    CHECK_THROWS_AS(compute_rmi(batch, *f, tiny), ConfigError);
}

TEST_CASE("identity metric and explicit unit covariance agree") {
    const SampleBatch batch = correlated_gaussian(5000, 8);
    const auto f = weight_feature({1.0, 2.0});
    const RmiEstimate a = compute_rmi(batch, *f, NoiseMetric::identity());
    const RmiEstimate b = compute_rmi(batch, *f, NoiseMetric::constant(Matrix::Identity(2, 2)));
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
    const RmiEstimate c = compute_rmi(
        batch, *f, NoiseMetric::callable([](const Vector&) { return Matrix::Identity(2, 2); }));
    CHECK(a.value == doctest::Approx(c.value).epsilon(1e-14));
}

TEST_CASE("invalid noise metrics are rejected") {
    const SampleBatch batch = correlated_gaussian(100, 9);
    const auto f = weight_feature({1.0, 0.0});

    Matrix indefinite = Matrix::Zero(2, 2);
    indefinite(0, 0) = 1.0;
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(compute_rmi(batch, *f, NoiseMetric::constant(indefinite)), ConfigError);

    Matrix skew(2, 2);
    skew << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(compute_rmi(batch, *f, NoiseMetric::constant(skew)), ConfigError);
}

TEST_CASE("epsilon estimator validates its inputs") {
    const SampleBatch batch = gaussian_batch_1d(100, 1);
    const auto f = weight_feature({1.0});
    CHECK_THROWS_AS(compute_rmi_epsilon(batch, *f, 0.0, 2), ConfigError);
    CHECK_THROWS_AS(compute_rmi_epsilon(batch, *f, -0.1, 2), ConfigError);
    CHECK_THROWS_AS(compute_rmi_epsilon(batch, *f, 0.1, 0), ConfigError);

    SampleBatch wide;
    wide.data = Matrix::Random(50, 3);
    const auto f3 = weight_feature({1.0, 0.0, 0.0});
    CHECK_THROWS_AS(compute_rmi_epsilon(wide, *f3, 0.1, 2), ConfigError);
}

TEST_CASE("epsilon estimator approaches the finite-noise closed form") {
    // For the identity on a standard Gaussian the exact value is
    // 0.5 ln(2 pi e (1 + eps^2)).
    const SampleBatch batch = gaussian_batch_1d(50000, 12);
    const auto f = weight_feature({1.0});
    const double eps = 0.5;
    const EpsilonEstimate est = compute_rmi_epsilon(batch, *f, eps, 2);
    const double expect = 0.5 * std::log(2.0 * M_PI * M_E * (1.0 + eps * eps));
    CHECK(est.value == doctest::Approx(expect).epsilon(0.04));
    CHECK_FALSE(est.low_occupancy);

    const EpsilonEstimate again = compute_rmi_epsilon(batch, *f, eps, 2);
    CHECK(est.value == again.value);  // fixed default seed, deterministic
}

TEST_CASE("additivity inequality holds with near-zero gap for independent projections") {
    const SampleBatch batch = correlated_gaussian(20000, 33);
    const auto f1 = weight_feature({1.0, 0.0});
    const auto f2 = weight_feature({0.0, 1.0});
    const InequalityGap g = inequality_gap(batch, f1, f2);
    // For a linear pair the joint term and the right-hand side are the same
    // quantity up to histogram error, and the bound must not be violated.
    CHECK(g.gap >= -0.05);
    CHECK(std::abs(g.gap) < 0.05);
    CHECK(g.lhs_joint == doctest::Approx(g.rhs).epsilon(0.1));
}

TEST_CASE("stacking a feature with a rescaled copy of itself is degenerate") {
    const SampleBatch batch = correlated_gaussian(500, 34);
    const auto f1 = weight_feature({1.0, 0.0});
    const auto f2 = weight_feature({2.0, 0.0});
    CHECK_THROWS_AS(inequality_gap(batch, f1, f2), DegenerateFeatureError);
}

TEST_CASE("information-loss identity reconstructs the rmi as the noise shrinks") {
    const SampleBatch batch = gaussian_batch_1d(40000, 21);
    const auto f = weight_feature({2.0});
    const Matrix y = f->values(batch.data);
    const GridSpec grid = auto_grid(y);

    const InformationLossResult small_eps = information_loss_identity(batch, *f, 0.05, grid);
    CHECK(small_eps.rmi == compute_rmi(batch, *f, grid).value);
    CHECK(std::abs(small_eps.reconstructed - small_eps.rmi) <= 0.05);

    const InformationLossResult large_eps = information_loss_identity(batch, *f, 0.5, grid);
    CHECK(std::abs(large_eps.reconstructed - large_eps.rmi) >
          std::abs(small_eps.reconstructed - small_eps.rmi));

    CHECK_THROWS_AS(information_loss_identity(batch, *f, 0.0, grid), ConfigError);
}

TEST_CASE("pca finds the dominant axis of an axis-aligned Gaussian") {
    SampleBatch batch;
    batch.data.resize(20000, 2);
    Rng rng(55);
    for (long i = 0; i < batch.data.rows(); ++i) {
        batch.data(i, 0) = 2.0 * rng.normal();  // variance 4
        batch.data(i, 1) = rng.normal();        // variance 1
    }
    const auto pca = pca_fit(batch, 1);
    const Matrix& W = pca->weight();
    REQUIRE(W.rows() == 1);
    CHECK(W.row(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(W(0, 0) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(W(0, 1)) < 0.05);
}

TEST_CASE("pca on the pinned covariance matches the closed-form eigenvector") {
    // Leading eigenvector of [[0.64, -0.56], [-0.56, 1.0]] with the
    // largest-magnitude-entry-positive sign convention.
    const SampleBatch batch = correlated_gaussian(100000, 77);
    const auto pca = pca_fit(batch, 1);
    const Matrix& W = pca->weight();
    CHECK(W(0, 0) == doctest::Approx(-0.589065).epsilon(0.03));
    CHECK(W(0, 1) == doctest::Approx(0.808086).epsilon(0.03));

    // The returned direction must be an exact eigenvector of the sample
    // covariance (not merely close to the population one).
    const Matrix& X = batch.data;
    const Vector mean = X.colwise().mean();
    const Matrix centered = X.rowwise() - mean.transpose();
    const Matrix cov = (centered.transpose() * centered) / static_cast<double>(X.rows() - 1);
    const Vector v = W.row(0).transpose();
    const double lambda = v.dot(cov * v);
    CHECK((cov * v - lambda * v).norm() < 1e-9);
}

TEST_CASE("two-component pca returns an orthonormal basis") {
    const SampleBatch batch = correlated_gaussian(5000, 78);
    const auto pca = pca_fit(batch, 2);
    const Matrix& W = pca->weight();
    REQUIRE(W.rows() == 2);
    CHECK((W * W.transpose() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK_THROWS_AS(pca_fit(batch, 3), ConfigError);
    CHECK_THROWS_AS(pca_fit(batch, 0), ConfigError);
}

}  // TEST_SUITE("rmi_core")
