#pragma once

// Large-dimension approximation of the analog estimator. The Toeplitz
// autocorrelations are asymptotically diagonalized by the unitary Fourier
// matrix U, so their inverse square roots become element-wise.
//
// U is the 1/sqrt(N)-normalized forward DFT, U(n, k) = e^{-j 2 pi n k / N} / sqrt(N).

#include "quadinfo/analog.hpp"

#include <Eigen/Dense>

namespace quadinfo::szego {

// Approximate eigenvalues below this are clipped before the inverse square root.
inline constexpr double kClipThreshold = 1e-6;

// 2 sqrt(N) Re([U (t . v)]_n) - 1 with the triangular window v_n = 1 - n/N.
// This is the exact diagonal of U Toe(t) U^H. Requires t(0) = 1.
Eigen::VectorXd transformed_diagonal(const Eigen::VectorXcd& generator);

// U A U^H through batched column then row transforms.
Eigen::MatrixXcd unitary_transform(const Eigen::MatrixXcd& a);

// Off-diagonal share of ||U T U^H||_F^2.
double toeplitz_diag_residual(const Eigen::MatrixXcd& toeplitz);

// ||[p']^{-1/2} U C_xy U^H [q']^{-1/2}||_F^2, no matrix inversion.
analog::Estimate smi_fast_from_stats(const analog::FeatureStats& stats);
analog::Estimate smi_analog_fast(const analog::RealPairedSamples& s, const analog::FeatureConfig& cfg);

}  // namespace quadinfo::szego
