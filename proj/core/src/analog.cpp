#include "quadinfo/analog.hpp"

#include "quadinfo/numeric.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace quadinfo::analog {

namespace {

using cd = std::complex<double>;

constexpr double kConditioningWarning = 0.10;
constexpr Eigen::Index kChunk = 2048;
// The power recurrence is re-anchored on a fresh std::polar this often.
constexpr int kReanchor = 32;

std::vector<double> standardized(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = accurate_sum(v) / n;
    std::vector<double> out(v.size());
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] - mean;
        sq[i] = out[i] * out[i];
    }
    const double sd = std::sqrt(accurate_sum(sq) / n);
    if (sd > 0.0)
        for (double& x : out) x /= sd;
    return out;
}

// Writes e^{j alpha n x} for n = first..first+count-1 into out[0..count).
template <typename Out>
void fill_powers(double x, double alpha, int first, int count, Out&& out) {
    const cd step = std::polar(1.0, alpha * x);
    cd z{};
    for (int i = 0; i < count; ++i) {
        if (i % kReanchor == 0)
            z = std::polar(1.0, alpha * static_cast<double>(first + i) * x);
        else
            z *= step;
        out(i) = z;
    }
}

// Sums of e^{j alpha n x(l)} for n = -K..2K and the cross moment
// sum_l phi(x(l)) phi(y(l))^H on the symmetric grid.
struct Moments {
    Eigen::VectorXcd x_sum;  // 3K + 1 entries, offset K
    Eigen::VectorXcd y_sum;
    Eigen::MatrixXcd cross;
};

Moments accumulate(const std::vector<double>& x, const std::vector<double>& y, double alpha, int k) {
    const int n = 2 * k + 1;
    const int span = 3 * k + 1;
    const auto count = static_cast<Eigen::Index>(x.size());

    Moments m;
    m.x_sum = Eigen::VectorXcd::Zero(span);
    m.y_sum = Eigen::VectorXcd::Zero(span);
    m.cross = Eigen::MatrixXcd::Zero(n, n);

    Eigen::MatrixXcd fx(span, kChunk);
    Eigen::MatrixXcd fy(span, kChunk);
    for (Eigen::Index start = 0; start < count; start += kChunk) {
        const Eigen::Index b = std::min(kChunk, count - start);
        for (Eigen::Index l = 0; l < b; ++l) {
            fill_powers(x[start + l], alpha, -k, span, [&](int i) -> cd& { return fx(i, l); });
            fill_powers(y[start + l], alpha, -k, span, [&](int i) -> cd& { return fy(i, l); });
        }
        m.x_sum += fx.leftCols(b).rowwise().sum();
        m.y_sum += fy.leftCols(b).rowwise().sum();
        m.cross.noalias() += fx.topLeftCorner(n, b) * fy.topLeftCorner(n, b).adjoint();
    }
    return m;
}

}  // namespace

RealPairedSamples::RealPairedSamples(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) throw std::invalid_argument("x and y must have equal length");
    for (std::size_t l = 0; l < x_.size(); ++l) {
        if (!std::isfinite(x_[l]) || !std::isfinite(y_[l]))
            throw std::invalid_argument("non-finite sample at index " + std::to_string(l));
    }
}

RealPairedSamples RealPairedSamples::with_y_shifted(std::size_t shift) const {
    const std::size_t n = y_.size();
    std::vector<double> y(n);
    for (std::size_t l = 0; l < n; ++l) y[l] = y_[(l + shift) % n];
    return RealPairedSamples(x_, std::move(y));
}

void FeatureConfig::validate() const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("sigma2 must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (dimension < 3 || dimension % 2 == 0) throw std::invalid_argument("feature dimension must be odd and >= 3");
}

FeatureConfig FeatureConfig::derive(double sigma2, const DimensionRule& rule, double sigma_x) {
    FeatureConfig cfg;
    cfg.sigma2 = sigma2;
    cfg.alpha = 1.0 / (rule.q * sigma_x);
    cfg.dimension = dimension_from_sigma(rule.k, rule.q, sigma_x, std::sqrt(sigma2));
    cfg.validate();
    return cfg;
}

int dimension_from_sigma(double k, double q, double sigma_x, double sigma) {
    if (!(k > 0.0) || !(q > 0.0) || !(sigma_x > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("dimension rule inputs must be positive");
    const double half = std::ceil(k * q * sigma_x / sigma);
    return 2 * static_cast<int>(std::max(half, 1.0)) + 1;
}

double sigma2_from_silverman(double p, std::size_t sample_count) {
    if (!(p > 0.0)) throw std::invalid_argument("Silverman scale p must be positive");
    if (sample_count < 1) throw std::invalid_argument("sample count must be >= 1");
    return p * std::pow(static_cast<double>(sample_count), -0.4);
}

Eigen::VectorXcd map_to_feature(double x, const FeatureConfig& cfg) {
    cfg.validate();
    Eigen::VectorXcd v(cfg.dimension);
    fill_powers(x, cfg.alpha, -cfg.half_width(), cfg.dimension, [&](int i) -> cd& { return v(i); });
    return v;
}

TaperVectors make_tapers(const FeatureConfig& cfg) {
    cfg.validate();
    const int n = cfg.dimension;
    const int k = cfg.half_width();
    const double c = 0.5 * cfg.sigma2 * cfg.alpha * cfg.alpha;
    TaperVectors t;
    t.symmetric.resize(n);
    t.asymmetric.resize(n);
    t.triangular.resize(n);
    for (int i = 0; i < n; ++i) {
        const double d = static_cast<double>(i - k);
        t.symmetric(i) = std::exp(-c * d * d);
        t.asymmetric(i) = std::exp(-c * static_cast<double>(i) * i);
        t.triangular(i) = 1.0 - static_cast<double>(i) / n;
    }
    return t;
}

Eigen::MatrixXcd toeplitz_hermitian(const Eigen::VectorXcd& c) {
    const Eigen::Index n = c.size();
    Eigen::MatrixXcd t(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) t(i, j) = i >= j ? c(i - j) : std::conj(c(j - i));
    return t;
}

FeatureStats compute_feature_stats(const RealPairedSamples& s, const FeatureConfig& cfg) {
    cfg.validate();
    if (s.size() < 2) throw std::invalid_argument("at least two sample pairs are required");

    const std::vector<double> x = cfg.standardize ? standardized(s.x()) : s.x();
    const std::vector<double> y = cfg.standardize ? standardized(s.y()) : s.y();
    const int n = cfg.dimension;
    const int k = cfg.half_width();
    const double inv_l = 1.0 / static_cast<double>(s.size());
    const TaperVectors taper = make_tapers(cfg);

    const Moments m = accumulate(x, y, cfg.alpha, k);

    FeatureStats st;
    st.sample_count = s.size();
    st.p = m.x_sum.head(n).cwiseProduct(taper.symmetric.cast<cd>()) * inv_l;
    st.q = m.y_sum.head(n).cwiseProduct(taper.symmetric.cast<cd>()) * inv_l;
    st.p_a = m.x_sum.segment(k, n).cwiseProduct(taper.asymmetric.cast<cd>()) * inv_l;
    st.q_a = m.y_sum.segment(k, n).cwiseProduct(taper.asymmetric.cast<cd>()) * inv_l;
    st.p_a(0) = 1.0;
    st.q_a(0) = 1.0;

    const Eigen::MatrixXd ww = taper.symmetric * taper.symmetric.transpose();
    st.cxy = (m.cross * inv_l).cwiseProduct(ww.cast<cd>()) - st.p * st.q.adjoint();
    st.rx = toeplitz_hermitian(st.p_a);
    st.ry = toeplitz_hermitian(st.q_a);
    return st;
}

std::vector<std::string> Diagnostics::warnings() const {
    std::vector<std::string> out;
    if (undersampled) out.emplace_back("sample count is below the feature dimension");
    if (floored_fraction_x > kConditioningWarning || floored_fraction_y > kConditioningWarning) {
        std::ostringstream os;
        os << "ill-conditioned autocorrelation: floored eigenvalue mass " << floored_fraction_x << " (x), "
           << floored_fraction_y << " (y) of the trace";
        out.push_back(os.str());
    }
    if (clipped_bins > 0)
        out.push_back(std::to_string(clipped_bins) + " approximate eigenvalues clipped at the floor");
    return out;
}

Estimate smi_from_stats(const FeatureStats& st) {
    const InverseSqrt ix = hermitian_inverse_sqrt(st.rx);
    const InverseSqrt iy = hermitian_inverse_sqrt(st.ry);
    Estimate e;
    e.value = (ix.matrix * st.cxy * iy.matrix).squaredNorm();
    e.diagnostics.undersampled = st.sample_count < static_cast<std::size_t>(st.rx.rows());
    e.diagnostics.floored_fraction_x = ix.floored_fraction();
    e.diagnostics.floored_fraction_y = iy.floored_fraction();
    return e;
}

Estimate smi_analog(const RealPairedSamples& s, const FeatureConfig& cfg) {
    return smi_from_stats(compute_feature_stats(s, cfg));
}

std::size_t default_shift(std::size_t sample_count) { return sample_count / 2; }

BiasReducedEstimate smi_bias_reduced(const RealPairedSamples& s, const FeatureConfig& cfg,
                                     std::optional<std::size_t> shift) {
    const std::size_t n = s.size();
    const std::size_t j = shift.value_or(default_shift(n));
    if (n == 0 || j % n == 0) throw std::invalid_argument("circular shift must not be a multiple of L");
    BiasReducedEstimate out;
    out.raw = smi_analog(s, cfg).value;
    out.floor = smi_analog(s.with_y_shifted(j), cfg).value;
    out.value = out.raw - out.floor;
    return out;
}

}  // namespace quadinfo::analog
