#pragma once

// Experiment sweeps over grids of dependence, sample size, smoothing and
// dimension. One CSV record per (cell, estimator); cells run in a worker pool
// and are written in plan order.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quadinfo::cli {

struct ExperimentPlan {
    std::string scenario = "custom";  // fig3 | fig5 | fig6 | fig8 | custom
    std::vector<double> smi;          // SMI targets of the +-r mixture; ignored when r is set
    std::vector<double> r;
    std::vector<std::size_t> L;
    std::vector<double> sigma2;       // ignored when p is set
    std::vector<double> p;            // sigma2 = p L^{-2/5}
    std::vector<int> N;               // empty: derived from k, q
    std::optional<double> alpha;      // default 1/q
    double k = 3.0;
    double q = 2.5;
    std::vector<std::string> estimators;  // analog, fast, bias_reduced; fig3 also ratio, discrete
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::size_t genie_samples = 200000;
    // fig3 only: number of random 4x4 channels, concentration log-uniform on [lo, hi].
    std::size_t channels = 0;
    double dirichlet_lo = 1.0;
    double dirichlet_hi = 1000.0;

    void validate() const;
};

// Desk-scale defaults of a named scenario. Throws for an unknown name.
ExperimentPlan preset(const std::string& scenario);

struct Cell {
    std::size_t index = 0;
    double smi_target = 0.0;  // NaN when the cell was given by r
    double r = 0.0;
    std::size_t L = 0;
    double sigma2 = 0.0;
    double p = 0.0;  // NaN when sigma2 was given directly
    int N = 0;
    double alpha = 0.0;
    double dirichlet = 0.0;  // fig3 only, NaN otherwise
};

std::vector<Cell> expand(const ExperimentPlan& plan);

// Samples of trial t in cell c come from substream c * kCellStride + t.
inline constexpr std::uint64_t kCellStride = 1000000;
// Genie of cell c uses substream kGenieStream + c.
inline constexpr std::uint64_t kGenieStream = std::uint64_t{1} << 40;

const std::vector<std::string>& record_columns();

// CSV lines (no header, newline-terminated) for one cell.
std::string run_cell(const ExperimentPlan& plan, const Cell& cell);

struct SweepOptions {
    std::string out;  // empty: write to the stream passed to run_sweep
    std::size_t jobs = 1;
    bool resume = false;
};

// Returns the number of cells that failed.
std::size_t run_sweep(const ExperimentPlan& plan, const SweepOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace quadinfo::cli
