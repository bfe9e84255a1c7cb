#include "oracles.hpp"

#include <quadinfo/discrete.hpp>
#include <quadinfo/errors.hpp>
#include <quadinfo/numeric.hpp>
#include <quadinfo/rng.hpp>
#include <quadinfo/simulate.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace quadinfo;
using namespace quadinfo::discrete;

namespace {

DiscretePairedSamples random_stream(std::size_t nx, std::size_t ny, std::size_t len, Engine& eng) {
    // Dependent stream: y copies x modulo ny with probability 0.4.
    std::uniform_int_distribution<std::uint32_t> ux(0, nx - 1), uy(0, ny - 1);
    std::bernoulli_distribution copy(0.4);
    std::vector<std::uint32_t> x(len), y(len);
    for (std::size_t l = 0; l < len; ++l) {
        x[l] = ux(eng);
        y[l] = copy(eng) ? static_cast<std::uint32_t>(x[l] % ny) : uy(eng);
    }
    return DiscretePairedSamples(x, y, nx, ny);
}

Codebook random_codebook(std::size_t n, Engine& eng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = {g(eng), g(eng)};
    return Codebook(m);
}

DiscretePairedSamples balanced_bijection() {
    return DiscretePairedSamples({0, 1, 0, 1, 1, 0}, {1, 0, 1, 0, 0, 1}, 2, 2);
}

}  // namespace

TEST(EmpiricalMasses, Examples) {
    const auto e = empirical_masses(DiscretePairedSamples({0, 1, 0, 1}, {0, 1, 0, 1}, 2, 2));
    EXPECT_EQ(e.p[0], 0.5);
    EXPECT_EQ(e.q[1], 0.5);
    EXPECT_EQ(e.joint.values()(0, 0), 0.5);
    EXPECT_EQ(e.joint.values()(0, 1), 0.0);

    const auto single = empirical_masses(DiscretePairedSamples({0}, {0}, 3, 2));
    EXPECT_EQ(single.joint.values()(0, 0), 1.0);
    EXPECT_EQ(single.joint.values().sum(), 1.0);

    auto eng = make_engine(1);
    const auto r = empirical_masses(random_stream(5, 4, 1000, eng));
    const Eigen::VectorXd rows = r.joint.values().rowwise().sum();
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_EQ(rows(i), r.p[i]);
}

TEST(DiscretePairedSamples, Validation) {
    EXPECT_THROW(DiscretePairedSamples({0, 1}, {0}, 2, 2), std::invalid_argument);
    EXPECT_THROW(DiscretePairedSamples({0, 2}, {0, 1}, 2, 2), std::invalid_argument);
    const auto s = DiscretePairedSamples::infer({0, 4, 2}, {1, 1, 0});
    EXPECT_EQ(s.nx(), 5u);
    EXPECT_EQ(s.ny(), 2u);
}

TEST(Codebook, RejectsRankDeficient) {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, 2.0, 2.0, 4.0;
    EXPECT_THROW(Codebook{m}, std::invalid_argument);
    EXPECT_THROW(Codebook{Eigen::MatrixXcd::Identity(3, 2)}, std::invalid_argument);
}

TEST(SmiPluginAutocorr, Examples) {
    const auto id = Codebook::identity(2);
    EXPECT_NEAR(smi_plugin_autocorr(balanced_bijection(), id, id), 1.0, 1e-12);

    Degeneracy deg;
    EXPECT_EQ(smi_plugin_autocorr(DiscretePairedSamples({1, 1, 1}, {0, 0, 0}, 2, 3), id, Codebook::identity(3), &deg),
              0.0);
    EXPECT_TRUE(deg.degenerate());
    EXPECT_EQ(deg.unseen_x, 1u);
    EXPECT_EQ(deg.unseen_y, 2u);
}

TEST(SmiPluginAutocorr, IdentityCodebookMatchesEmpiricalSmi) {
    auto eng = make_engine(2);
    for (int t = 0; t < 10; ++t) {
        const auto s = random_stream(4, 3, 500, eng);
        const double ref = oracle::smi_direct(empirical_masses(s).joint.values());
        EXPECT_NEAR(smi_plugin_autocorr(s, Codebook::identity(4), Codebook::identity(3)), ref, 1e-9);
    }
}

TEST(SmiPluginAutocorr, CodebookInvariance) {
    auto eng = make_engine(3);
    for (int t = 0; t < 10; ++t) {
        const auto s = random_stream(4, 5, 400, eng);
        const double ref = smi_plugin_autocorr(s, Codebook::identity(4), Codebook::identity(5));
        for (int c = 0; c < 5; ++c)
            EXPECT_NEAR(smi_plugin_autocorr(s, random_codebook(4, eng), random_codebook(5, eng)), ref, 1e-9);
    }
}

TEST(SmiPluginAutocorr, UnseenSymbolMatchesReducedAlphabet) {
    // Symbol 2 of x never occurs.
    const DiscretePairedSamples full({0, 1, 3, 0, 1, 3, 0, 0}, {0, 1, 1, 2, 0, 1, 2, 0}, 4, 3);
    const DiscretePairedSamples reduced({0, 1, 2, 0, 1, 2, 0, 0}, {0, 1, 1, 2, 0, 1, 2, 0}, 3, 3);
    Degeneracy deg;
    const double a = smi_plugin_autocorr(full, Codebook::identity(4), Codebook::identity(3), &deg);
    EXPECT_EQ(deg.unseen_x, 1u);
    EXPECT_NEAR(a, smi_plugin_autocorr(reduced, Codebook::identity(3), Codebook::identity(3)), 1e-12);
    EXPECT_NEAR(smi_plugin_simplex(full), smi_plugin_simplex(reduced), 1e-9);
}

TEST(SimplexCodebook, KnownPoints) {
    const auto two = simplex_codebook(2).vectors();
    ASSERT_EQ(two.rows(), 1);
    EXPECT_NEAR(std::abs(two(0, 0) - two(0, 1)), 2.0, 1e-15);
    EXPECT_NEAR(std::abs(two(0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(two(0, 0).real() + two(0, 1).real(), 0.0, 1e-15);

    const auto three = simplex_codebook(3).vectors();
    ASSERT_EQ(three.rows(), 2);
    const double h = std::sqrt(3.0) / 2.0;
    const double expected[3][2] = {{1.0, 0.0}, {-0.5, h}, {-0.5, -h}};
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 2; ++r) EXPECT_NEAR(three(r, c).real(), expected[c][r], 1e-15);

    EXPECT_THROW(simplex_codebook(1), std::invalid_argument);
}

TEST(SimplexCodebook, GramIsScaledCenteringMatrix) {
    for (std::size_t n : {2u, 3u, 5u, 8u}) {
        const auto v = simplex_codebook(n).vectors();
        const Eigen::MatrixXcd gram = v.adjoint() * v;
        const double c = gram(0, 0).real() / (1.0 - 1.0 / n);
        const Eigen::MatrixXd centering =
            Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
        EXPECT_LT((gram - c * centering.cast<std::complex<double>>()).norm(), 1e-12);
        EXPECT_LT(v.rowwise().sum().norm(), 1e-12);
    }
}

TEST(SmiPluginSimplex, Examples) {
    EXPECT_NEAR(smi_plugin_simplex(balanced_bijection()), 1.0, 1e-12);

    auto eng = make_engine(4);
    std::uniform_int_distribution<std::uint32_t> u(0, 2);
    std::vector<std::uint32_t> x(100000), y(100000);
    for (auto& e : x) e = u(eng);
    for (auto& e : y) e = u(eng);
    EXPECT_LT(smi_plugin_simplex(DiscretePairedSamples(x, y, 3, 3)), 0.01);

    const auto s = random_stream(3, 3, 2000, eng);
    const double full = smi_plugin_simplex(s);
    const double cut = smi_plugin_covariance(s, simplex_codebook(3).truncated(1), simplex_codebook(3));
    EXPECT_LE(cut, full + 1e-12);
}

TEST(SmiPluginSimplex, EqualsAutocorrForm) {
    auto eng = make_engine(5);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_stream(2 + t % 4, 2 + t % 5, 300, eng);
        EXPECT_NEAR(smi_plugin_simplex(s), smi_plugin_autocorr(s, Codebook::identity(s.nx()), Codebook::identity(s.ny())),
                    1e-9);
    }
}

TEST(HgrPlugin, Examples) {
    EXPECT_NEAR(hgr_plugin(balanced_bijection()), 1.0, 1e-12);
    auto eng = make_engine(6);
    std::uniform_int_distribution<std::uint32_t> u(0, 3);
    std::vector<std::uint32_t> x(100000), y(100000);
    for (auto& e : x) e = u(eng);
    for (auto& e : y) e = u(eng);
    EXPECT_LT(hgr_plugin(DiscretePairedSamples(x, y, 4, 4)), 0.05);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_stream(3 + t % 3, 4, 500, eng);
        const double h = hgr_plugin(s), smi = smi_plugin_simplex(s);
        EXPECT_LE(h * h, smi + 1e-12);
        EXPECT_LE(smi, (std::min(s.nx(), s.ny()) - 1.0) * h * h + 1e-12);
        EXPECT_LE(h, 1.0 + 1e-9);
    }
}

TEST(Dtm, Examples) {
    const DmcSpec ident(Eigen::MatrixXd::Identity(3, 3), measures::MassFunction::uniform(3));
    EXPECT_LT((dtm(ident) - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);

    for (int t = 0; t < 20; ++t) {
        const auto spec = simulate::random_dmc(3 + t % 3, 2 + t % 4, 900 + t);
        const auto sv = singular_values(dtm(spec));
        EXPECT_NEAR(sv[0], 1.0, 1e-10);
        const auto c = coherence_covariance(spec.joint(), Codebook::identity(spec.input.size()),
                                            Codebook::identity(spec.output().size()));
        const auto cc = singular_values(measures::coherence_matrix(spec.joint()));
        EXPECT_NEAR(sv[1], cc[0], 1e-9);
        EXPECT_NEAR(sv[1], c.hgr(), 1e-9);
    }
}

TEST(Dtm, ZeroOutputMarginal) {
    Eigen::MatrixXd w(3, 2);
    w << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
    EXPECT_THROW(dtm(DmcSpec(w, measures::MassFunction::uniform(2))), ZeroMarginalError);
}

TEST(DmcSpec, RejectsNonStochasticColumns) {
    Eigen::MatrixXd w(2, 2);
    w << 0.5, 0.5, 0.6, 0.5;
    EXPECT_THROW(DmcSpec(w, measures::MassFunction::uniform(2)), std::invalid_argument);
}

TEST(CanonicalCorrelations, Examples) {
    EXPECT_TRUE(canonical_correlations(DiscretePairedSamples({0, 0, 0}, {1, 1, 1}, 2, 2)).empty());
    const auto diag = canonical_correlations(balanced_bijection());
    ASSERT_EQ(diag.size(), 1u);
    EXPECT_NEAR(diag[0], 1.0, 1e-12);

    auto eng = make_engine(7);
    const auto s = random_stream(4, 4, 4000, eng);
    const auto cc = canonical_correlations(s);
    const auto ref = singular_values(measures::coherence_matrix(empirical_masses(s).joint));
    ASSERT_EQ(cc.size(), 3u);
    double sq = 0.0;
    for (std::size_t i = 0; i < cc.size(); ++i) {
        EXPECT_NEAR(cc[i], ref[i], 1e-9);
        sq += cc[i] * cc[i];
    }
    EXPECT_NEAR(sq, smi_plugin_simplex(s), 1e-9);
    EXPECT_NEAR(ref.back(), 0.0, 1e-9);

    const auto via_codebooks = canonical_correlations(s, random_codebook(4, eng), random_codebook(4, eng));
    for (std::size_t i = 0; i < cc.size(); ++i) EXPECT_NEAR(via_codebooks[i], cc[i], 1e-9);
}

TEST(PluginConsistency, ConvergesToExact) {
    Eigen::MatrixXd j(4, 4);
    j << 0.10, 0.02, 0.03, 0.05, 0.01, 0.12, 0.04, 0.03, 0.05, 0.02, 0.15, 0.03, 0.02, 0.06, 0.02, 0.25;
    const DmcSpec spec = [&] {
        const Eigen::VectorXd p = j.rowwise().sum();
        Eigen::MatrixXd w = (p.cwiseInverse().asDiagonal() * j).transpose();
        return DmcSpec(w, measures::MassFunction({p.data(), p.data() + 4}));
    }();
    auto eng = make_engine(8);
    const auto s = simulate::sample_dmc(spec, 100000, eng);
    EXPECT_LT(std::abs(smi_plugin_simplex(s) - measures::smi_exact(measures::JointMass(j))), 0.02);
}
