#include "quadinfo/simulate.hpp"

#include "quadinfo/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace quadinfo::simulate {

namespace {

double log_normal_1d(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (d * d / var + std::log(2.0 * std::numbers::pi * var));
}

double log_normal_2d(double x, double y, const GaussianComponent& c) {
    const double det = c.var_x * c.var_y - c.cov * c.cov;
    const double dx = x - c.mean_x;
    const double dy = y - c.mean_y;
    const double quad = (c.var_y * dx * dx - 2.0 * c.cov * dx * dy + c.var_x * dy * dy) / det;
    return -0.5 * quad - std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det);
}

template <typename F>
double log_mixture(const std::vector<GaussianComponent>& cs, F&& log_term) {
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        terms[i] = std::log(cs[i].weight) + log_term(cs[i]);
        top = std::max(top, terms[i]);
    }
    if (!std::isfinite(top)) return top;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - top);
    return top + std::log(s);
}

double log_density(const BivariateMixture& m, double x, double y) {
    return log_mixture(m.components(), [&](const GaussianComponent& c) { return log_normal_2d(x, y, c); });
}
double log_marginal_x(const BivariateMixture& m, double x) {
    return log_mixture(m.components(), [&](const GaussianComponent& c) { return log_normal_1d(x, c.mean_x, c.var_x); });
}
double log_marginal_y(const BivariateMixture& m, double y) {
    return log_mixture(m.components(), [&](const GaussianComponent& c) { return log_normal_1d(y, c.mean_y, c.var_y); });
}

GenieValue mean_and_error(std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    GenieValue g;
    g.value = accurate_sum(values) / n;
    for (double& v : values) v = (v - g.value) * (v - g.value);
    const double var = values.size() > 1 ? accurate_sum(values) / (n - 1.0) : 0.0;
    g.std_error = std::sqrt(var / n);
    return g;
}

GenieValue ratio_and_error(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = accurate_sum(a) / n;
    const double mb = accurate_sum(b) / n;
    GenieValue g;
    g.value = ma / (2.0 * mb);
    if (a.size() < 2 || mb == 0.0) {
        g.std_error = a.size() < 2 ? 0.0 : INFINITY;
        return g;
    }
    std::vector<double> lin(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - ma) - 2.0 * g.value * (b[i] - mb);
        lin[i] = d * d;
    }
    g.std_error = std::sqrt(accurate_sum(lin) / (n - 1.0) / n) / (2.0 * std::abs(mb));
    return g;
}

}  // namespace

BivariateMixture::BivariateMixture(std::vector<GaussianComponent> components) : components_(std::move(components)) {
    if (components_.empty()) throw std::invalid_argument("mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0)) throw std::invalid_argument("mixture weights must be positive");
        if (!(c.var_x > 0.0) || !(c.var_y > 0.0) || !(c.var_x * c.var_y - c.cov * c.cov > 0.0))
            throw std::invalid_argument("component covariance must be positive definite");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
}

BivariateMixture BivariateMixture::gaussian(double rho) {
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("correlation must satisfy |rho| < 1");
    return BivariateMixture({GaussianComponent{1.0, 0.0, 0.0, 1.0, 1.0, rho}});
}

BivariateMixture BivariateMixture::contaminated(double sigma2) const {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("contamination variance must be >= 0");
    auto cs = components_;
    for (auto& c : cs) {
        c.var_x += sigma2;
        c.var_y += sigma2;
    }
    return BivariateMixture(std::move(cs));
}

double BivariateMixture::density(double x, double y) const { return std::exp(log_density(*this, x, y)); }
double BivariateMixture::marginal_x(double x) const { return std::exp(log_marginal_x(*this, x)); }
double BivariateMixture::marginal_y(double y) const { return std::exp(log_marginal_y(*this, y)); }

analog::RealPairedSamples BivariateMixture::sample(std::size_t count, Engine& engine) const {
    std::vector<double> weights;
    for (const auto& c : components_) weights.push_back(c.weight);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::normal_distribution<double> normal;

    std::vector<double> x(count);
    std::vector<double> y(count);
    for (std::size_t l = 0; l < count; ++l) {
        const auto& c = components_[components_.size() == 1 ? 0 : pick(engine)];
        const double z1 = normal(engine);
        const double z2 = normal(engine);
        const double sx = std::sqrt(c.var_x);
        x[l] = c.mean_x + sx * z1;
        y[l] = c.mean_y + (c.cov / sx) * z1 + std::sqrt(c.var_y - c.cov * c.cov / c.var_x) * z2;
    }
    return analog::RealPairedSamples(std::move(x), std::move(y));
}

GmmSpec::GmmSpec(double r_) : r(r_) {
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("GMM dependence parameter must lie in [0, 1)");
}

BivariateMixture GmmSpec::mixture() const {
    return BivariateMixture({GaussianComponent{0.5, 0.0, 0.0, 1.0, 1.0, r},
                             GaussianComponent{0.5, 0.0, 0.0, 1.0, 1.0, -r}});
}

double GmmSpec::dependence_for_smi(double smi) {
    if (!(smi >= 0.0)) throw std::invalid_argument("target SMI must be >= 0");
    return std::pow(smi / (1.0 + smi), 0.25);
}

analog::RealPairedSamples gmm_sample(const GmmSpec& spec, std::size_t count, std::uint64_t seed,
                                     std::uint64_t stream) {
    Engine engine = make_engine(seed, stream);
    return spec.mixture().sample(count, engine);
}

GenieResult genie_from_samples(const BivariateMixture& density, const analog::RealPairedSamples& samples,
                               bool control_variate) {
    if (samples.size() == 0) throw std::invalid_argument("genie needs at least one sample");
    std::vector<double> ratio(samples.size());
    std::vector<double> log_ratio(samples.size());
    for (std::size_t l = 0; l < samples.size(); ++l) {
        const double x = samples.x()[l];
        const double y = samples.y()[l];
        log_ratio[l] = log_density(density, x, y) - log_marginal_x(density, x) - log_marginal_y(density, y);
        ratio[l] = std::exp(log_ratio[l]) - 1.0;
        if (control_variate) {
            const double inv = std::exp(-log_ratio[l]) - 1.0;
            ratio[l] += inv;
            log_ratio[l] += inv;
        }
    }
    GenieResult out;
    out.local_ratio = ratio_and_error(ratio, log_ratio);
    out.smi = mean_and_error(ratio);
    out.mi = mean_and_error(log_ratio);
    return out;
}

GenieResult genie(const BivariateMixture& source, const GenieConfig& cfg) {
    if (cfg.mc_samples < 2) throw std::invalid_argument("genie needs at least two Monte-Carlo samples");
    const BivariateMixture noisy = source.contaminated(cfg.sigma2);
    Engine engine = make_engine(cfg.seed, 0);
    return genie_from_samples(noisy, noisy.sample(cfg.mc_samples, engine), cfg.control_variate);
}

GenieValue genie_smi(const BivariateMixture& source, const GenieConfig& cfg) { return genie(source, cfg).smi; }

GenieValue genie_mi(const BivariateMixture& source, const GenieConfig& cfg) { return genie(source, cfg).mi; }

discrete::DmcSpec random_dmc(std::size_t n, std::size_t m, std::uint64_t seed, double concentration,
                             std::uint64_t stream) {
    if (n < 2 || m < 2) throw std::invalid_argument("random channels need alphabets of size >= 2");
    if (!(concentration > 0.0)) throw std::invalid_argument("Dirichlet concentration must be positive");
    Engine engine = make_engine(seed, stream);
    std::gamma_distribution<double> flat(1.0, 1.0);
    std::gamma_distribution<double> column(concentration, 1.0);

    auto draw = [&](std::gamma_distribution<double>& g, std::size_t size) {
        std::vector<double> v(size);
        double total = 0.0;
        do {
            total = 0.0;
            for (double& e : v) total += (e = g(engine));
        } while (!(total > 0.0));
        for (double& e : v) e /= total;
        return v;
    };

    std::vector<double> input = draw(flat, n);
    Eigen::MatrixXd w(m, n);
    for (std::size_t c = 0; c < n; ++c) {
        const auto col = draw(column, m);
        for (std::size_t r = 0; r < m; ++r) w(r, c) = col[r];
    }
    return discrete::DmcSpec(std::move(w), measures::MassFunction(std::move(input)));
}

discrete::DiscretePairedSamples sample_dmc(const discrete::DmcSpec& spec, std::size_t count, Engine& engine) {
    const auto in = spec.input.values();
    std::discrete_distribution<std::uint32_t> pick_x(in.begin(), in.end());
    std::vector<std::discrete_distribution<std::uint32_t>> pick_y;
    for (Eigen::Index c = 0; c < spec.w.cols(); ++c) {
        const Eigen::VectorXd col = spec.w.col(c);
        pick_y.emplace_back(col.data(), col.data() + col.size());
    }
    std::vector<std::uint32_t> x(count);
    std::vector<std::uint32_t> y(count);
    for (std::size_t l = 0; l < count; ++l) {
        x[l] = pick_x(engine);
        y[l] = pick_y[x[l]](engine);
    }
    return discrete::DiscretePairedSamples(std::move(x), std::move(y), spec.input.size(),
                                           static_cast<std::size_t>(spec.w.rows()));
}

GenieValue genie_smi_discrete(const discrete::DmcSpec& spec, const GenieConfig& cfg) {
    Engine engine = make_engine(cfg.seed, 0);
    const auto s = sample_dmc(spec, cfg.mc_samples, engine);
    const measures::JointMass j = spec.joint();
    const measures::MassFunction p = spec.input;
    const measures::MassFunction q = spec.output();
    std::vector<double> ratio(s.size());
    for (std::size_t l = 0; l < s.size(); ++l) {
        const auto a = s.x()[l];
        const auto b = s.y()[l];
        ratio[l] = j.values()(a, b) / (p[a] * q[b]) - 1.0;
    }
    return mean_and_error(ratio);
}

}  // namespace quadinfo::simulate
