#pragma once

// Synthetic sources with known densities and the genie-aided Monte-Carlo
// oracles that evaluate their information content.

#include "quadinfo/analog.hpp"
#include "quadinfo/discrete.hpp"
#include "quadinfo/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace quadinfo::simulate {

struct GaussianComponent {
    double weight = 1.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 1.0;
    double var_y = 1.0;
    double cov = 0.0;
};

// Finite mixture of bivariate normals.
class BivariateMixture {
public:
    explicit BivariateMixture(std::vector<GaussianComponent> components);

    // Single bivariate normal with unit variances and correlation rho.
    static BivariateMixture gaussian(double rho);

    const std::vector<GaussianComponent>& components() const { return components_; }

    // Adds independent N(0, sigma2) noise to both coordinates.
    BivariateMixture contaminated(double sigma2) const;

    double density(double x, double y) const;
    double marginal_x(double x) const;
    double marginal_y(double y) const;

    analog::RealPairedSamples sample(std::size_t count, Engine& engine) const;

private:
    std::vector<GaussianComponent> components_;
};

// Equal-weight mixture of zero-mean unit-variance normals with correlations
// +r and -r. Marginals are standard normal and E[xy] = 0 for every r.
struct GmmSpec {
    explicit GmmSpec(double r);

    double r;

    BivariateMixture mixture() const;
    // r^4 / (1 - r^4) for the uncontaminated source.
    static double dependence_for_smi(double smi);
};

analog::RealPairedSamples gmm_sample(const GmmSpec& spec, std::size_t count, std::uint64_t seed,
                                     std::uint64_t stream = 0);

struct GenieConfig {
    std::size_t mc_samples = 200000;
    std::uint64_t seed = 1;
    double sigma2 = 0.0;  // contamination variance
    // Adds the zero-mean control 1/ratio - 1 to both averages. The integrands
    // become second order, which resolves weak dependence; variance is
    // infinite for strongly dependent Gaussians, so it is off by default.
    bool control_variate = false;
};

struct GenieValue {
    double value = 0.0;
    double std_error = 0.0;
};

struct GenieResult {
    GenieValue smi;
    GenieValue mi;
    // SMI / (2 MI) with a delta-method error that uses the pairing of both averages.
    GenieValue local_ratio;
};

// Averages of r = p(x,y) / (p(x) p(y)) - 1 and ln r over the given samples,
// which are assumed to be drawn from `density`.
GenieResult genie_from_samples(const BivariateMixture& density, const analog::RealPairedSamples& samples,
                               bool control_variate = false);

// Monte-Carlo SMI and MI of the source contaminated with cfg.sigma2 noise.
GenieResult genie(const BivariateMixture& source, const GenieConfig& cfg);
GenieValue genie_smi(const BivariateMixture& source, const GenieConfig& cfg);
GenieValue genie_mi(const BivariateMixture& source, const GenieConfig& cfg);

// Channel columns ~ symmetric Dirichlet(concentration), input mass ~ flat
// Dirichlet. concentration = 1 is uniform on the simplex; large values give
// columns close to uniform and nearly independent outputs.
discrete::DmcSpec random_dmc(std::size_t n, std::size_t m, std::uint64_t seed, double concentration = 1.0,
                             std::uint64_t stream = 0);

discrete::DiscretePairedSamples sample_dmc(const discrete::DmcSpec& spec, std::size_t count, Engine& engine);

// Monte-Carlo SMI of a channel through the ratio J / (p q) under J.
GenieValue genie_smi_discrete(const discrete::DmcSpec& spec, const GenieConfig& cfg);

}  // namespace quadinfo::simulate
