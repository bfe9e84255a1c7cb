#pragma once

// Closed-form quadratic information surrogates on known mass functions and
// Gaussian parameters. All quantities are in nats.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace quadinfo::measures {

// Probability vector. Entries are non-negative and sum to one within 1e-12.
class MassFunction {
public:
    explicit MassFunction(std::vector<double> values);

    static MassFunction uniform(std::size_t n);
    static MassFunction point(std::size_t n, std::size_t at);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

// N x M joint probability matrix; rows index X, columns index Y.
class JointMass {
public:
    explicit JointMass(Eigen::MatrixXd values);

    // J = p q^T.
    static JointMass product(const MassFunction& p, const MassFunction& q);

    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }

    MassFunction marginal_x() const;
    MassFunction marginal_y() const;

private:
    Eigen::MatrixXd values_;
};

// q = base + scale * direction, with a zero-sum direction.
struct PerturbedPair {
    PerturbedPair(MassFunction base, std::vector<double> direction, double scale);

    MassFunction base;
    std::vector<double> direction;
    double scale;

    MassFunction perturbed() const;
};

double information_potential(const MassFunction& p);
double renyi2_entropy(const MassFunction& p);
double tsallis2_entropy(const MassFunction& p);
// Uses 0 ln 0 = 0.
double shannon_entropy(const MassFunction& p);

// Both throw SupportMismatchError when q vanishes where p does not.
double kl_divergence(const MassFunction& p, const MassFunction& q);
double chi2_divergence(const MassFunction& p, const MassFunction& q);
double renyi2_divergence(const MassFunction& p, const MassFunction& q);

// The three algebraic forms of the Pearson chi-squared divergence:
// sum p^2/q - 1, E_p[((p-q)/sqrt(pq))^2] and ||(p-q)/sqrt(q)||^2.
struct Chi2Forms {
    double ratio;
    double expectation;
    double norm;
};
Chi2Forms chi2_forms(const MassFunction& p, const MassFunction& q);

// Closed-form chi-squared divergence between N(mean_p, var_p) and N(mean_q, var_q).
// Throws SupportMismatchError when var_p >= 2 var_q (the divergence is infinite).
double chi2_divergence_gaussian(double mean_p, double var_p, double mean_q, double var_q);

// [p]^{-1/2} (J - p q^T) [q]^{-1/2}. Throws ZeroMarginalError on a zero marginal entry.
Eigen::MatrixXd coherence_matrix(const JointMass& joint);

// Squared-loss mutual information ||coherence||_F^2.
double smi_exact(const JointMass& joint);

double shannon_mi(const JointMass& joint);

// I2 = ln(1 + Is). Rejects negative input.
double i2_from_smi(double smi);

// ||J - p q^T||_F^2.
double xi_quadratic(const JointMass& joint);

struct GaussianInformation {
    double mi;
    double smi;
};
// Bivariate normal with Pearson coefficient rho, |rho| < 1.
GaussianInformation gaussian_closed_forms(double rho);

}  // namespace quadinfo::measures
