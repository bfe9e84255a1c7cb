#include "quadinfo/szego.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace quadinfo::szego {

namespace {

using cd = std::complex<double>;

// FFTW planning is not thread-safe; execution on a plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Unnormalized in-place DFTs over `howmany` vectors of length n.
void batched_dft(cd* data, int n, int howmany, int stride, int dist, int sign) {
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_many_dft(1, &n, howmany, reinterpret_cast<fftw_complex*>(data), nullptr, stride, dist,
                                  reinterpret_cast<fftw_complex*>(data), nullptr, stride, dist, sign,
                                  FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

Eigen::VectorXd transformed_diagonal(const Eigen::VectorXcd& t) {
    const auto n = static_cast<int>(t.size());
    if (n == 0) return {};
    if (std::abs(t(0) - cd(1.0)) > 1e-12) throw std::invalid_argument("generator must satisfy t(0) = 1");
    Eigen::VectorXcd g(n);
    for (int i = 0; i < n; ++i) g(i) = t(i) * (1.0 - static_cast<double>(i) / n);
    batched_dft(g.data(), n, 1, 1, n, FFTW_FORWARD);
    // sqrt(N) [U g]_n is the plain forward DFT.
    return 2.0 * g.real().array() - 1.0;
}

Eigen::MatrixXcd unitary_transform(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("unitary_transform expects a square matrix");
    const auto n = static_cast<int>(a.rows());
    Eigen::MatrixXcd m = a;
    if (n == 0) return m;
    // Columns: U A.
    batched_dft(m.data(), n, n, 1, n, FFTW_FORWARD);
    // Rows: (U A) U^H, i.e. an inverse DFT along each row.
    batched_dft(m.data(), n, n, n, 1, FFTW_BACKWARD);
    return m / static_cast<double>(n);
}

double toeplitz_diag_residual(const Eigen::MatrixXcd& toeplitz) {
    const Eigen::MatrixXcd m = unitary_transform(toeplitz);
    const double total = m.squaredNorm();
    if (total == 0.0) return 0.0;
    const double diag = m.diagonal().squaredNorm();
    return std::max(0.0, total - diag) / total;
}

analog::Estimate smi_fast_from_stats(const analog::FeatureStats& st) {
    const Eigen::VectorXd pd = transformed_diagonal(st.p_a);
    const Eigen::VectorXd qd = transformed_diagonal(st.q_a);
    const Eigen::MatrixXcd m = unitary_transform(st.cxy);

    analog::Estimate e;
    auto inv_sqrt = [&](const Eigen::VectorXd& d) {
        Eigen::VectorXd out(d.size());
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            double v = d(i);
            if (v < kClipThreshold) {
                v = kClipThreshold;
                ++e.diagnostics.clipped_bins;
            }
            out(i) = 1.0 / std::sqrt(v);
        }
        return out;
    };
    const Eigen::VectorXd a = inv_sqrt(pd);
    const Eigen::VectorXd b = inv_sqrt(qd);
    e.value = (a.asDiagonal() * m * b.asDiagonal()).squaredNorm();
    e.diagnostics.undersampled = st.sample_count < static_cast<std::size_t>(st.cxy.rows());
    return e;
}

analog::Estimate smi_analog_fast(const analog::RealPairedSamples& s, const analog::FeatureConfig& cfg) {
    return smi_fast_from_stats(analog::compute_feature_stats(s, cfg));
}

}  // namespace quadinfo::szego
