#pragma once

// SMI estimation for real-valued paired samples through the sampled
// characteristic-function feature map, Gaussian-convolution tapering and a
// canonical-correlation coherence norm.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace quadinfo::analog {

class RealPairedSamples {
public:
    RealPairedSamples(std::vector<double> x, std::vector<double> y);

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }
    std::size_t size() const { return x_.size(); }

    // Pairs x(l) with y((l + shift) mod L).
    RealPairedSamples with_y_shifted(std::size_t shift) const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

// Support factor k and dynamic-range factor q of the dimension rule
// N = 2 ceil(k q sigma_x / sigma) + 1 and of alpha = 1 / (q sigma_x).
struct DimensionRule {
    double k = 3.0;
    double q = 2.5;
};

struct FeatureConfig {
    double sigma2 = 0.1;  // smoothing variance, source units^2
    double alpha = 0.4;   // frequency sampling period, rad per source unit
    int dimension = 3;    // N = 2K + 1, odd, >= 3
    // Center and scale each stream to unit sample variance before mapping.
    bool standardize = true;

    int half_width() const { return (dimension - 1) / 2; }
    void validate() const;

    // alpha = 1 / (q sigma_x) and N from the dimension rule.
    static FeatureConfig derive(double sigma2, const DimensionRule& rule = {}, double sigma_x = 1.0);
};

int dimension_from_sigma(double k, double q, double sigma_x, double sigma);

// sigma^2 = p L^{-2/5}.
double sigma2_from_silverman(double p, std::size_t sample_count);

// e^{j alpha n x} for n = -K..K.
Eigen::VectorXcd map_to_feature(double x, const FeatureConfig& cfg);

struct TaperVectors {
    Eigen::VectorXd symmetric;   // e^{-sigma2 alpha^2 (n-K)^2 / 2}
    Eigen::VectorXd asymmetric;  // e^{-sigma2 alpha^2 n^2 / 2}
    Eigen::VectorXd triangular;  // 1 - n / N
};

TaperVectors make_tapers(const FeatureConfig& cfg);

struct FeatureStats {
    Eigen::VectorXcd p;    // tapered CF means on n = -K..K
    Eigen::VectorXcd q;
    Eigen::VectorXcd p_a;  // tapered CF means on n = 0..N-1, p_a(0) = 1
    Eigen::VectorXcd q_a;
    Eigen::MatrixXcd cxy;  // tapered cross-covariance
    Eigen::MatrixXcd rx;   // Toe(p_a)
    Eigen::MatrixXcd ry;   // Toe(q_a)
    std::size_t sample_count = 0;
};

// Single pass over the samples (after optional standardization). L >= 2.
FeatureStats compute_feature_stats(const RealPairedSamples& s, const FeatureConfig& cfg);

struct Diagnostics {
    bool undersampled = false;        // L < N
    double floored_fraction_x = 0.0;  // eigenvalue mass treated as zero / trace
    double floored_fraction_y = 0.0;
    std::size_t clipped_bins = 0;     // fast path only

    std::vector<std::string> warnings() const;
};

struct Estimate {
    double value = 0.0;
    Diagnostics diagnostics;
};

// ||R_x^{-1/2} C_xy R_y^{-1/2}||_F^2
Estimate smi_from_stats(const FeatureStats& stats);
Estimate smi_analog(const RealPairedSamples& s, const FeatureConfig& cfg);

struct BiasReducedEstimate {
    double value = 0.0;  // raw - floor
    double raw = 0.0;
    double floor = 0.0;  // estimate on the circularly shifted pairing
};

std::size_t default_shift(std::size_t sample_count);

// Rejects shift = 0 mod L.
BiasReducedEstimate smi_bias_reduced(const RealPairedSamples& s, const FeatureConfig& cfg,
                                     std::optional<std::size_t> shift = std::nullopt);

// Hermitian Toeplitz matrix with the given first column.
Eigen::MatrixXcd toeplitz_hermitian(const Eigen::VectorXcd& first_column);

}  // namespace quadinfo::analog
