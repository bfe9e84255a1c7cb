#pragma once

// Plug-in SMI and HGR estimation for finite-alphabet paired samples through
// second-order statistics of codebook-mapped data.

#include "quadinfo/measures.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace quadinfo::discrete {

using measures::JointMass;
using measures::MassFunction;

// Aligned symbol streams with x in [0, nx) and y in [0, ny).
class DiscretePairedSamples {
public:
    DiscretePairedSamples(std::vector<std::uint32_t> x, std::vector<std::uint32_t> y,
                          std::size_t nx, std::size_t ny);

    // Alphabet sizes inferred as max index + 1.
    static DiscretePairedSamples infer(std::vector<std::uint32_t> x, std::vector<std::uint32_t> y);

    const std::vector<std::uint32_t>& x() const { return x_; }
    const std::vector<std::uint32_t>& y() const { return y_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t size() const { return x_.size(); }

private:
    std::vector<std::uint32_t> x_;
    std::vector<std::uint32_t> y_;
    std::size_t nx_;
    std::size_t ny_;
};

// One column per alphabet symbol. Full row rank: smallest singular value
// above 1e-10 times the largest.
class Codebook {
public:
    explicit Codebook(Eigen::MatrixXcd vectors);

    static Codebook identity(std::size_t n);

    const Eigen::MatrixXcd& vectors() const { return vectors_; }
    Eigen::Index dimension() const { return vectors_.rows(); }
    Eigen::Index symbols() const { return vectors_.cols(); }

    // Keeps the first `dimension` coordinates.
    Codebook truncated(Eigen::Index dimension) const;

private:
    Eigen::MatrixXcd vectors_;
};

// N equidistant unit vectors in N-1 dimensions, centred at the origin. N >= 2.
Codebook simplex_codebook(std::size_t n);

// Whitened cross-covariance. Singular values are cached, non-increasing and
// truncated to the count that can be non-zero given the observed alphabet.
class CoherenceMatrix {
public:
    CoherenceMatrix(Eigen::MatrixXcd values, std::size_t max_rank);

    const Eigen::MatrixXcd& values() const { return values_; }
    const std::vector<double>& singular_values() const { return singular_values_; }

    // Squared Frobenius norm.
    double smi() const;
    // Largest singular value, 0 when there is none.
    double hgr() const;

private:
    Eigen::MatrixXcd values_;
    std::vector<double> singular_values_;
};

struct EmpiricalMasses {
    MassFunction p;
    MassFunction q;
    JointMass joint;
};

EmpiricalMasses empirical_masses(const DiscretePairedSamples& s);

struct Degeneracy {
    std::size_t unseen_x = 0;
    std::size_t unseen_y = 0;
    bool degenerate() const { return unseen_x > 0 || unseen_y > 0; }
};

// R_x^{-1/2} C_xy R_y^{-1/2} with autocorrelations R = F [p] F^H and the
// cross-covariance F (J - p q^T) G^H. Codebooks are square here.
CoherenceMatrix coherence_autocorr(const JointMass& joint, const Codebook& fx, const Codebook& fy,
                                   Degeneracy* degeneracy = nullptr);

// C_x^{-1/2} C_xy C_y^{-1/2} with covariances C_x = F ([p] - p p^T) F^H.
// Codebooks may have any dimension up to the alphabet size.
CoherenceMatrix coherence_covariance(const JointMass& joint, const Codebook& fx, const Codebook& fy,
                                     Degeneracy* degeneracy = nullptr);

double smi_plugin_autocorr(const DiscretePairedSamples& s, const Codebook& fx, const Codebook& fy,
                           Degeneracy* degeneracy = nullptr);
double smi_plugin_covariance(const DiscretePairedSamples& s, const Codebook& fx, const Codebook& fy,
                             Degeneracy* degeneracy = nullptr);
// Covariance form with (N-1)- and (M-1)-simplex codebooks.
double smi_plugin_simplex(const DiscretePairedSamples& s, Degeneracy* degeneracy = nullptr);

// Largest singular value of the simplex-form sample coherence matrix.
double hgr_plugin(const DiscretePairedSamples& s, Degeneracy* degeneracy = nullptr);

std::vector<double> canonical_correlations(const DiscretePairedSamples& s);
std::vector<double> canonical_correlations(const DiscretePairedSamples& s, const Codebook& fx,
                                           const Codebook& fy);

// Discrete memoryless channel: W is M x N with W(m, n) = Pr(Y = m | X = n).
struct DmcSpec {
    DmcSpec(Eigen::MatrixXd w, MassFunction input);

    Eigen::MatrixXd w;
    MassFunction input;

    MassFunction output() const;
    // J = [p] W^T, N x M.
    JointMass joint() const;
};

// Divergence transition matrix [q]^{-1/2} W [p]^{1/2}.
Eigen::MatrixXd dtm(const DmcSpec& spec);

}  // namespace quadinfo::discrete
