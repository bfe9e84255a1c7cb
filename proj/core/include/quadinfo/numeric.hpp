#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace quadinfo {

// Relative eigenvalue floor shared by every Hermitian inverse square root.
inline constexpr double kEigenvalueFloor = 1e-10;

// Sum with pairwise (cascade) accumulation once the input is longer than 1024.
double accurate_sum(std::span<const double> values);

struct InverseSqrt {
    Eigen::MatrixXcd matrix;
    std::size_t rank = 0;
    // Sum of |eigenvalue| over eigenvalues treated as zero, and the trace.
    double floored_mass = 0.0;
    double trace = 0.0;

    double floored_fraction() const { return trace > 0.0 ? floored_mass / trace : 0.0; }
};

// Moore-Penrose inverse square root of a Hermitian positive semidefinite matrix.
// Eigenvalues below relative_floor * max eigenvalue count as exact zeros.
InverseSqrt hermitian_inverse_sqrt(const Eigen::MatrixXcd& a,
                                   double relative_floor = kEigenvalueFloor);

// Non-increasing singular values.
std::vector<double> singular_values(const Eigen::MatrixXcd& a);
std::vector<double> singular_values(const Eigen::MatrixXd& a);

}  // namespace quadinfo
