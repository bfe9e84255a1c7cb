#include "quadinfo/measures.hpp"

#include "quadinfo/errors.hpp"
#include "quadinfo/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quadinfo::measures {

namespace {

constexpr double kSumTolerance = 1e-12;

void check_same_size(const MassFunction& p, const MassFunction& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("mass functions have different alphabet sizes");
}

void check_support(const MassFunction& p, const MassFunction& q) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (q[i] == 0.0 && p[i] > 0.0)
            throw SupportMismatchError("reference mass is zero at symbol " + std::to_string(i) +
                                       " where the other mass is positive");
    }
}

template <typename F>
double sum_terms(std::size_t n, F&& term) {
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = term(i);
    return accurate_sum(terms);
}

}  // namespace

MassFunction::MassFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("mass function must have at least one entry");
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("mass function entries must be finite and non-negative");
    }
    const double total = accurate_sum(values_);
    if (std::abs(total - 1.0) > kSumTolerance)
        throw std::invalid_argument("mass function must sum to 1, got " + std::to_string(total));
}

MassFunction MassFunction::uniform(std::size_t n) {
    return MassFunction(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

MassFunction MassFunction::point(std::size_t n, std::size_t at) {
    std::vector<double> v(n, 0.0);
    v.at(at) = 1.0;
    return MassFunction(std::move(v));
}

JointMass::JointMass(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.size() == 0) throw std::invalid_argument("joint mass must be non-empty");
    if ((values_.array() < 0.0).any() || !values_.allFinite())
        throw std::invalid_argument("joint mass entries must be finite and non-negative");
    std::vector<double> flat(values_.data(), values_.data() + values_.size());
    const double total = accurate_sum(flat);
    if (std::abs(total - 1.0) > kSumTolerance)
        throw std::invalid_argument("joint mass must sum to 1, got " + std::to_string(total));
}

JointMass JointMass::product(const MassFunction& p, const MassFunction& q) {
    Eigen::MatrixXd j(p.size(), q.size());
    for (std::size_t n = 0; n < p.size(); ++n)
        for (std::size_t m = 0; m < q.size(); ++m) j(n, m) = p[n] * q[m];
    return JointMass(std::move(j));
}

MassFunction JointMass::marginal_x() const {
    std::vector<double> v(values_.rows());
    for (Eigen::Index n = 0; n < values_.rows(); ++n) v[n] = values_.row(n).sum();
    return MassFunction(std::move(v));
}

MassFunction JointMass::marginal_y() const {
    std::vector<double> v(values_.cols());
    for (Eigen::Index m = 0; m < values_.cols(); ++m) v[m] = values_.col(m).sum();
    return MassFunction(std::move(v));
}

PerturbedPair::PerturbedPair(MassFunction base_, std::vector<double> direction_, double scale_)
    : base(std::move(base_)), direction(std::move(direction_)), scale(scale_) {
    if (direction.size() != base.size())
        throw std::invalid_argument("perturbation direction must match the alphabet size");
    if (std::abs(accurate_sum(direction)) > kSumTolerance)
        throw std::invalid_argument("perturbation direction must sum to zero");
    (void)perturbed();
}

MassFunction PerturbedPair::perturbed() const {
    std::vector<double> v(base.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = base[i] + scale * direction[i];
    return MassFunction(std::move(v));
}

double information_potential(const MassFunction& p) {
    return sum_terms(p.size(), [&](std::size_t i) { return p[i] * p[i]; });
}

double renyi2_entropy(const MassFunction& p) { return -std::log(information_potential(p)); }

double tsallis2_entropy(const MassFunction& p) { return 1.0 - information_potential(p); }

double shannon_entropy(const MassFunction& p) {
    return -sum_terms(p.size(), [&](std::size_t i) { return p[i] > 0.0 ? p[i] * std::log(p[i]) : 0.0; });
}

double kl_divergence(const MassFunction& p, const MassFunction& q) {
    check_same_size(p, q);
    check_support(p, q);
    return sum_terms(p.size(), [&](std::size_t i) { return p[i] > 0.0 ? p[i] * std::log(p[i] / q[i]) : 0.0; });
}

double chi2_divergence(const MassFunction& p, const MassFunction& q) {
    check_same_size(p, q);
    check_support(p, q);
    // Centered form; avoids the cancellation in sum p^2/q - 1 near p = q.
    return sum_terms(p.size(), [&](std::size_t i) {
        if (q[i] == 0.0) return 0.0;
        const double d = p[i] - q[i];
        return d * d / q[i];
    });
}

double renyi2_divergence(const MassFunction& p, const MassFunction& q) {
    return std::log1p(chi2_divergence(p, q));
}

Chi2Forms chi2_forms(const MassFunction& p, const MassFunction& q) {
    check_same_size(p, q);
    check_support(p, q);
    Chi2Forms f{};
    f.ratio = sum_terms(p.size(), [&](std::size_t i) { return q[i] > 0.0 ? p[i] * p[i] / q[i] : 0.0; }) - 1.0;
    // E_p skips symbols with p = 0; each of them contributes q there.
    double missing_q = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] == 0.0) missing_q += q[i];
    f.expectation = sum_terms(p.size(), [&](std::size_t i) {
                        if (p[i] == 0.0) return 0.0;
                        const double r = (p[i] - q[i]) / std::sqrt(p[i] * q[i]);
                        return p[i] * r * r;
                    }) + missing_q;
    f.norm = sum_terms(p.size(), [&](std::size_t i) {
        if (q[i] == 0.0) return 0.0;
        const double r = (p[i] - q[i]) / std::sqrt(q[i]);
        return r * r;
    });
    return f;
}

double chi2_divergence_gaussian(double mean_p, double var_p, double mean_q, double var_q) {
    if (!(var_p > 0.0) || !(var_q > 0.0)) throw std::invalid_argument("variances must be positive");
    const double denom = 2.0 * var_q - var_p;
    if (denom <= 0.0)
        throw SupportMismatchError("chi-squared divergence is infinite: var_p >= 2 var_q");
    const double dm = mean_p - mean_q;
    return var_q / std::sqrt(var_p * denom) * std::exp(dm * dm / denom) - 1.0;
}

Eigen::MatrixXd coherence_matrix(const JointMass& joint) {
    const MassFunction p = joint.marginal_x();
    const MassFunction q = joint.marginal_y();
    for (std::size_t n = 0; n < p.size(); ++n)
        if (p[n] <= 0.0) throw ZeroMarginalError("X marginal is zero at symbol " + std::to_string(n));
    for (std::size_t m = 0; m < q.size(); ++m)
        if (q[m] <= 0.0) throw ZeroMarginalError("Y marginal is zero at symbol " + std::to_string(m));

    Eigen::MatrixXd c(joint.rows(), joint.cols());
    for (Eigen::Index n = 0; n < c.rows(); ++n)
        for (Eigen::Index m = 0; m < c.cols(); ++m)
            c(n, m) = (joint.values()(n, m) - p[n] * q[m]) / std::sqrt(p[n] * q[m]);
    return c;
}

double smi_exact(const JointMass& joint) {
    const Eigen::MatrixXd c = coherence_matrix(joint);
    std::vector<double> sq(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) sq[i] = c.data()[i] * c.data()[i];
    return accurate_sum(sq);
}

double shannon_mi(const JointMass& joint) {
    const MassFunction p = joint.marginal_x();
    const MassFunction q = joint.marginal_y();
    std::vector<double> terms;
    terms.reserve(joint.values().size());
    for (Eigen::Index n = 0; n < joint.rows(); ++n) {
        for (Eigen::Index m = 0; m < joint.cols(); ++m) {
            const double j = joint.values()(n, m);
            if (j > 0.0) terms.push_back(j * std::log(j / (p[n] * q[m])));
        }
    }
    return accurate_sum(terms);
}

double i2_from_smi(double smi) {
    if (!(smi >= 0.0)) throw std::invalid_argument("squared-loss mutual information must be >= 0");
    return std::log1p(smi);
}

double xi_quadratic(const JointMass& joint) {
    const MassFunction p = joint.marginal_x();
    const MassFunction q = joint.marginal_y();
    std::vector<double> terms(joint.values().size());
    std::size_t k = 0;
    for (Eigen::Index n = 0; n < joint.rows(); ++n) {
        for (Eigen::Index m = 0; m < joint.cols(); ++m) {
            const double d = joint.values()(n, m) - p[n] * q[m];
            terms[k++] = d * d;
        }
    }
    return accurate_sum(terms);
}

GaussianInformation gaussian_closed_forms(double rho) {
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("Pearson coefficient must satisfy |rho| < 1");
    const double r2 = rho * rho;
    return {-0.5 * std::log1p(-r2), r2 / (1.0 - r2)};
}

}  // namespace quadinfo::measures
