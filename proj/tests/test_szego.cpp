#include "oracles.hpp"

#include <quadinfo/analog.hpp>
#include <quadinfo/rng.hpp>
#include <quadinfo/simulate.hpp>
#include <quadinfo/szego.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace quadinfo;
using cd = std::complex<double>;

namespace {

Eigen::VectorXcd gaussian_generator(int n, double decay) {
    Eigen::VectorXcd t(n);
    for (int i = 0; i < n; ++i) t(i) = std::polar(std::exp(-decay * i * i), 0.3 * i);
    return t;
}

Eigen::MatrixXcd random_matrix(int n, std::uint64_t seed) {
    auto eng = make_engine(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = {g(eng), g(eng)};
    return a;
}

}  // namespace

TEST(TransformedDiagonal, ImpulseGivesOnes) {
    for (int n : {3, 16, 31}) {
        Eigen::VectorXcd t = Eigen::VectorXcd::Zero(n);
        t(0) = 1.0;
        const auto d = szego::transformed_diagonal(t);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(d(i), 1.0, 1e-14);
    }
}

TEST(TransformedDiagonal, MatchesDenseDiagonal) {
    for (int n : {16, 64}) {
        const auto t = gaussian_generator(n, 0.01);
        const auto u = oracle::dft_matrix(n);
        const Eigen::MatrixXcd dense = u * oracle::toeplitz(t) * u.adjoint();
        const auto d = szego::transformed_diagonal(t);
        for (int i = 0; i < n; ++i) {
            EXPECT_NEAR(d(i), dense(i, i).real(), 1e-12);
            EXPECT_NEAR(dense(i, i).imag(), 0.0, 1e-12);
        }
    }
}

TEST(TransformedDiagonal, FlatGeneratorSpike) {
    const int n = 32;
    const Eigen::VectorXcd t = Eigen::VectorXcd::Ones(n);
    const auto u = oracle::dft_matrix(n);
    const Eigen::MatrixXcd dense = u * oracle::toeplitz(t) * u.adjoint();
    const auto d = szego::transformed_diagonal(t);
    EXPECT_NEAR(d(0), static_cast<double>(n), 1e-10);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(d(i), dense(i, i).real(), 1e-10);
}

TEST(TransformedDiagonal, RequiresUnitLagZero) {
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(4);
    t(0) = 0.5;
    EXPECT_THROW(szego::transformed_diagonal(t), std::invalid_argument);
}

TEST(UnitaryTransform, MatchesDenseProduct) {
    for (int n : {5, 16, 33}) {
        const auto a = random_matrix(n, 100 + n);
        const auto u = oracle::dft_matrix(n);
        EXPECT_LT((szego::unitary_transform(a) - u * a * u.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(UnitaryTransform, PreservesFrobeniusNorm) {
    for (int n : {7, 64, 255}) {
        const auto a = random_matrix(n, n);
        EXPECT_NEAR(szego::unitary_transform(a).norm(), a.norm(), 1e-10 * a.norm());
    }
}

TEST(ToeplitzResidual, Examples) {
    EXPECT_EQ(szego::toeplitz_diag_residual(Eigen::MatrixXcd::Identity(12, 12)), 0.0);

    const double r16 = szego::toeplitz_diag_residual(oracle::toeplitz(gaussian_generator(16, 0.02)));
    const double r128 = szego::toeplitz_diag_residual(oracle::toeplitz(gaussian_generator(128, 0.02)));
    EXPECT_LT(r128, r16);

    // An untapered generator with slowly varying phase is not circulant and stays off-diagonal.
    Eigen::VectorXcd t(64);
    for (int i = 0; i < 64; ++i) t(i) = std::polar(1.0, 0.7 * i);
    EXPECT_GT(szego::toeplitz_diag_residual(oracle::toeplitz(t)), 0.05);
}

TEST(ToeplitzResidual, FullDiscrepancyShrinksWithDimension) {
    std::vector<double> err;
    for (int n : {16, 32, 64, 128, 256}) {
        const auto t = gaussian_generator(n, 0.05);
        const auto u = oracle::dft_matrix(n);
        const Eigen::MatrixXcd dense = u * oracle::toeplitz(t) * u.adjoint();
        const auto d = szego::transformed_diagonal(t);
        Eigen::MatrixXcd diff = dense;
        for (int i = 0; i < n; ++i) diff(i, i) -= d(i);
        err.push_back(diff.cwiseAbs().maxCoeff());
    }
    int inversions = 0;
    for (std::size_t i = 1; i < err.size(); ++i) inversions += err[i] > err[i - 1];
    EXPECT_LE(inversions, 1);
    EXPECT_LT(err.back(), err.front());
}

TEST(SmiFast, ExactOnCirculantStats) {
    const int n = 9;
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(n), s = Eigen::VectorXcd::Zero(n);
    t(0) = s(0) = 1.0;
    t(1) = {0.3, 0.1};
    t(n - 1) = std::conj(t(1));
    t(2) = {0.1, -0.05};
    t(n - 2) = std::conj(t(2));
    s(1) = {0.2, -0.2};
    s(n - 1) = std::conj(s(1));
    analog::FeatureStats st;
    st.p_a = t;
    st.q_a = s;
    st.rx = oracle::toeplitz(t);
    st.ry = oracle::toeplitz(s);
    st.cxy = random_matrix(n, 5) * 0.02;
    st.p = st.q = Eigen::VectorXcd::Zero(n);
    st.sample_count = 1000;
    EXPECT_NEAR(szego::smi_fast_from_stats(st).value, analog::smi_from_stats(st).value, 1e-10);
}

TEST(SmiFast, ConstantStreamsGiveZero) {
    const analog::RealPairedSamples s(std::vector<double>(40, 1.0), std::vector<double>(40, -2.0));
    const auto e = szego::smi_analog_fast(s, analog::FeatureConfig::derive(0.2));
    EXPECT_NEAR(e.value, 0.0, 1e-20);
}

TEST(SmiFast, NonNegativeAndConvergesWithDimension) {
    const auto s = simulate::gmm_sample(simulate::GmmSpec(0.8), 20000, 3);
    double prev_gap = INFINITY;
    for (int n : {17, 31, 61, 127}) {
        analog::FeatureConfig c;
        c.sigma2 = 0.4;
        c.alpha = 1.0 / 3.0;
        c.dimension = n;
        const auto st = analog::compute_feature_stats(s, c);
        const auto fast = szego::smi_fast_from_stats(st);
        EXPECT_GE(fast.value, 0.0);
        const double gap = std::abs(fast.value - analog::smi_from_stats(st).value);
        EXPECT_LE(gap, prev_gap);
        prev_gap = gap;
    }
}

TEST(SmiFast, ClippedBinsAreReported) {
    // A generator whose symbol dips below zero: 1 + 2 * 0.9 cos(w) < 0 near w = pi.
    const int n = 15;
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(n);
    t(0) = 1.0;
    t(1) = 0.9;
    analog::FeatureStats st;
    st.p_a = st.q_a = t;
    st.rx = st.ry = oracle::toeplitz(t);
    st.cxy = random_matrix(n, 8) * 0.01;
    st.p = st.q = Eigen::VectorXcd::Zero(n);
    st.sample_count = 100;
    const auto e = szego::smi_fast_from_stats(st);
    EXPECT_GT(e.diagnostics.clipped_bins, 0u);
    EXPECT_TRUE(std::isfinite(e.value));
    EXPECT_FALSE(e.diagnostics.warnings().empty());
}
