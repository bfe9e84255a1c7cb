#include "quadinfo/discrete.hpp"

#include "quadinfo/errors.hpp"
#include "quadinfo/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quadinfo::discrete {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kStochasticTolerance = 1e-12;

std::vector<Eigen::Index> support(const MassFunction& m) {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0.0) idx.push_back(static_cast<Eigen::Index>(i));
    return idx;
}

// Joint mass, marginals and codebooks restricted to the observed symbols.
struct Reduced {
    Eigen::VectorXd p;
    Eigen::VectorXd q;
    Eigen::MatrixXd centered;  // J - p q^T
    Eigen::MatrixXcd fx;
    Eigen::MatrixXcd fy;
};

Reduced reduce(const JointMass& joint, const Codebook& fx, const Codebook& fy, Degeneracy* degeneracy) {
    if (fx.symbols() != joint.rows() || fy.symbols() != joint.cols())
        throw std::invalid_argument("codebook column count must equal the alphabet size");
    const MassFunction p = joint.marginal_x();
    const MassFunction q = joint.marginal_y();
    const auto sx = support(p);
    const auto sy = support(q);
    if (degeneracy) {
        degeneracy->unseen_x = p.size() - sx.size();
        degeneracy->unseen_y = q.size() - sy.size();
    }

    Reduced r;
    r.p.resize(sx.size());
    r.q.resize(sy.size());
    r.fx.resize(fx.dimension(), sx.size());
    r.fy.resize(fy.dimension(), sy.size());
    for (std::size_t i = 0; i < sx.size(); ++i) {
        r.p(i) = p[sx[i]];
        r.fx.col(i) = fx.vectors().col(sx[i]);
    }
    for (std::size_t i = 0; i < sy.size(); ++i) {
        r.q(i) = q[sy[i]];
        r.fy.col(i) = fy.vectors().col(sy[i]);
    }
    r.centered.resize(sx.size(), sy.size());
    for (std::size_t a = 0; a < sx.size(); ++a)
        for (std::size_t b = 0; b < sy.size(); ++b)
            r.centered(a, b) = joint.values()(sx[a], sy[b]) - r.p(a) * r.q(b);
    return r;
}

CoherenceMatrix whiten(const Eigen::MatrixXcd& rx, const Eigen::MatrixXcd& cxy, const Eigen::MatrixXcd& ry,
                       bool autocorrelation) {
    const InverseSqrt ix = hermitian_inverse_sqrt(rx);
    const InverseSqrt iy = hermitian_inverse_sqrt(ry);
    // Autocorrelations keep the constant direction, which carries no cross-covariance.
    const std::size_t drop = autocorrelation ? 1 : 0;
    const std::size_t rank = std::min(ix.rank, iy.rank);
    return CoherenceMatrix(ix.matrix * cxy * iy.matrix, rank > drop ? rank - drop : 0);
}

}  // namespace

DiscretePairedSamples::DiscretePairedSamples(std::vector<std::uint32_t> x, std::vector<std::uint32_t> y,
                                             std::size_t nx, std::size_t ny)
    : x_(std::move(x)), y_(std::move(y)), nx_(nx), ny_(ny) {
    if (x_.size() != y_.size()) throw std::invalid_argument("x and y streams must have equal length");
    if (x_.empty()) throw std::invalid_argument("at least one sample pair is required");
    if (nx_ == 0 || ny_ == 0) throw std::invalid_argument("alphabet sizes must be positive");
    for (std::size_t l = 0; l < x_.size(); ++l) {
        if (x_[l] >= nx_ || y_[l] >= ny_)
            throw std::invalid_argument("symbol index out of range at sample " + std::to_string(l));
    }
}

DiscretePairedSamples DiscretePairedSamples::infer(std::vector<std::uint32_t> x, std::vector<std::uint32_t> y) {
    const std::size_t nx = x.empty() ? 0 : *std::max_element(x.begin(), x.end()) + std::size_t{1};
    const std::size_t ny = y.empty() ? 0 : *std::max_element(y.begin(), y.end()) + std::size_t{1};
    return DiscretePairedSamples(std::move(x), std::move(y), nx, ny);
}

Codebook::Codebook(Eigen::MatrixXcd vectors) : vectors_(std::move(vectors)) {
    if (vectors_.rows() == 0 || vectors_.rows() > vectors_.cols())
        throw std::invalid_argument("codebook must have between 1 and (symbols) rows");
    const auto s = singular_values(vectors_);
    if (!(s.back() > kRankTolerance * s.front()))
        throw std::invalid_argument("codebook is not full row rank");
}

Codebook Codebook::identity(std::size_t n) {
    return Codebook(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

Codebook Codebook::truncated(Eigen::Index dimension) const {
    if (dimension < 1 || dimension > vectors_.rows())
        throw std::invalid_argument("truncated dimension out of range");
    return Codebook(vectors_.topRows(dimension));
}

Codebook simplex_codebook(std::size_t n) {
    if (n < 2) throw std::invalid_argument("simplex codebook needs at least 2 symbols");
    const auto size = static_cast<Eigen::Index>(n);
    const double inv_n = 1.0 / static_cast<double>(n);

    // Gram-Schmidt over the centred canonical vectors e_i - 1/n.
    Eigen::MatrixXd basis(size, size - 1);
    for (Eigen::Index i = 0; i < size - 1; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Constant(size, -inv_n);
        v(i) += 1.0;
        for (Eigen::Index k = 0; k < i; ++k) v -= basis.col(k).dot(v) * basis.col(k);
        basis.col(i) = v.normalized();
    }
    // Symbol i sits at row i of the basis, rescaled to unit norm.
    Eigen::MatrixXd points = basis.transpose() / std::sqrt(1.0 - inv_n);
    return Codebook(points.cast<std::complex<double>>());
}

CoherenceMatrix::CoherenceMatrix(Eigen::MatrixXcd values, std::size_t max_rank) : values_(std::move(values)) {
    singular_values_ = quadinfo::singular_values(values_);
    if (singular_values_.size() > max_rank) singular_values_.resize(max_rank);
}

double CoherenceMatrix::smi() const { return values_.squaredNorm(); }

double CoherenceMatrix::hgr() const { return singular_values_.empty() ? 0.0 : singular_values_.front(); }

EmpiricalMasses empirical_masses(const DiscretePairedSamples& s) {
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(s.nx(), s.ny());
    for (std::size_t l = 0; l < s.size(); ++l) counts(s.x()[l], s.y()[l]) += 1.0;
    JointMass joint(counts / static_cast<double>(s.size()));
    // Marginals are the exact row and column sums of the joint estimate.
    MassFunction p = joint.marginal_x();
    MassFunction q = joint.marginal_y();
    return {std::move(p), std::move(q), std::move(joint)};
}

CoherenceMatrix coherence_autocorr(const JointMass& joint, const Codebook& fx, const Codebook& fy,
                                   Degeneracy* degeneracy) {
    if (fx.dimension() != fx.symbols() || fy.dimension() != fy.symbols())
        throw std::invalid_argument("autocorrelation form needs square codebooks");
    const Reduced r = reduce(joint, fx, fy, degeneracy);
    const Eigen::MatrixXcd rx = r.fx * r.p.cast<std::complex<double>>().asDiagonal() * r.fx.adjoint();
    const Eigen::MatrixXcd ry = r.fy * r.q.cast<std::complex<double>>().asDiagonal() * r.fy.adjoint();
    const Eigen::MatrixXcd cxy = r.fx * r.centered.cast<std::complex<double>>() * r.fy.adjoint();
    return whiten(rx, cxy, ry, true);
}

CoherenceMatrix coherence_covariance(const JointMass& joint, const Codebook& fx, const Codebook& fy,
                                     Degeneracy* degeneracy) {
    const Reduced r = reduce(joint, fx, fy, degeneracy);
    const Eigen::MatrixXd px = Eigen::MatrixXd(r.p.asDiagonal()) - r.p * r.p.transpose();
    const Eigen::MatrixXd py = Eigen::MatrixXd(r.q.asDiagonal()) - r.q * r.q.transpose();
    const Eigen::MatrixXcd cx = r.fx * px.cast<std::complex<double>>() * r.fx.adjoint();
    const Eigen::MatrixXcd cy = r.fy * py.cast<std::complex<double>>() * r.fy.adjoint();
    const Eigen::MatrixXcd cxy = r.fx * r.centered.cast<std::complex<double>>() * r.fy.adjoint();
    return whiten(cx, cxy, cy, false);
}

double smi_plugin_autocorr(const DiscretePairedSamples& s, const Codebook& fx, const Codebook& fy,
                           Degeneracy* degeneracy) {
    return coherence_autocorr(empirical_masses(s).joint, fx, fy, degeneracy).smi();
}

double smi_plugin_covariance(const DiscretePairedSamples& s, const Codebook& fx, const Codebook& fy,
                             Degeneracy* degeneracy) {
    return coherence_covariance(empirical_masses(s).joint, fx, fy, degeneracy).smi();
}

double smi_plugin_simplex(const DiscretePairedSamples& s, Degeneracy* degeneracy) {
    if (s.nx() < 2 || s.ny() < 2) {
        // A one-symbol alphabet carries no information.
        if (degeneracy) *degeneracy = {};
        return 0.0;
    }
    return smi_plugin_covariance(s, simplex_codebook(s.nx()), simplex_codebook(s.ny()), degeneracy);
}

double hgr_plugin(const DiscretePairedSamples& s, Degeneracy* degeneracy) {
    if (s.nx() < 2 || s.ny() < 2) return 0.0;
    return coherence_covariance(empirical_masses(s).joint, simplex_codebook(s.nx()), simplex_codebook(s.ny()),
                                degeneracy)
        .hgr();
}

std::vector<double> canonical_correlations(const DiscretePairedSamples& s) {
    if (s.nx() < 2 || s.ny() < 2) return {};
    return coherence_covariance(empirical_masses(s).joint, simplex_codebook(s.nx()), simplex_codebook(s.ny()))
        .singular_values();
}

std::vector<double> canonical_correlations(const DiscretePairedSamples& s, const Codebook& fx,
                                           const Codebook& fy) {
    const JointMass joint = empirical_masses(s).joint;
    if (fx.dimension() == fx.symbols() && fy.dimension() == fy.symbols())
        return coherence_autocorr(joint, fx, fy).singular_values();
    return coherence_covariance(joint, fx, fy).singular_values();
}

DmcSpec::DmcSpec(Eigen::MatrixXd w_, MassFunction input_) : w(std::move(w_)), input(std::move(input_)) {
    if (w.cols() != static_cast<Eigen::Index>(input.size()))
        throw std::invalid_argument("channel matrix must have one column per input symbol");
    if ((w.array() < 0.0).any()) throw std::invalid_argument("channel matrix entries must be non-negative");
    for (Eigen::Index n = 0; n < w.cols(); ++n) {
        if (std::abs(w.col(n).sum() - 1.0) > kStochasticTolerance)
            throw std::invalid_argument("channel column " + std::to_string(n) + " does not sum to 1");
    }
}

MassFunction DmcSpec::output() const {
    const Eigen::Map<const Eigen::VectorXd> p(input.values().data(), input.size());
    const Eigen::VectorXd q = w * p;
    return MassFunction({q.data(), q.data() + q.size()});
}

JointMass DmcSpec::joint() const {
    const Eigen::Map<const Eigen::VectorXd> p(input.values().data(), input.size());
    return JointMass(p.asDiagonal() * w.transpose());
}

Eigen::MatrixXd dtm(const DmcSpec& spec) {
    const MassFunction q = spec.output();
    Eigen::VectorXd q_isqrt(q.size());
    for (std::size_t m = 0; m < q.size(); ++m) {
        if (!(q[m] > 0.0)) throw ZeroMarginalError("channel output marginal is zero at symbol " + std::to_string(m));
        q_isqrt(m) = 1.0 / std::sqrt(q[m]);
    }
    Eigen::VectorXd p_sqrt(spec.input.size());
    for (std::size_t n = 0; n < spec.input.size(); ++n) p_sqrt(n) = std::sqrt(spec.input[n]);
    return q_isqrt.asDiagonal() * spec.w * p_sqrt.asDiagonal();
}

}  // namespace quadinfo::discrete
