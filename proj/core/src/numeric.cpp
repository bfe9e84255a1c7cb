#include "quadinfo/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace quadinfo {

namespace {

constexpr std::size_t kPairwiseThreshold = 1024;

double pairwise(std::span<const double> v) {
    if (v.size() <= kPairwiseThreshold) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

double accurate_sum(std::span<const double> values) { return pairwise(values); }

InverseSqrt hermitian_inverse_sqrt(const Eigen::MatrixXcd& a, double relative_floor) {
    InverseSqrt out;
    const auto n = a.rows();
    out.matrix = Eigen::MatrixXcd::Zero(n, n);
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const Eigen::MatrixXcd& vecs = eig.eigenvectors();

    out.trace = a.diagonal().real().sum();
    const double top = lambda.cwiseAbs().maxCoeff();
    const double cut = relative_floor * top;

    Eigen::VectorXd scale = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (top > 0.0 && lambda(i) > cut) {
            scale(i) = 1.0 / std::sqrt(lambda(i));
            ++out.rank;
        } else {
            out.floored_mass += std::abs(lambda(i));
        }
    }
    out.matrix = vecs * scale.asDiagonal() * vecs.adjoint();
    return out;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& a) {
    if (a.size() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

std::vector<double> singular_values(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

}  // namespace quadinfo
