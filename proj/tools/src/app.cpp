#include "quadinfo/cli/app.hpp"

#include "quadinfo/cli/csv.hpp"
#include "quadinfo/cli/sweep.hpp"

#include <quadinfo/analog.hpp>
#include <quadinfo/discrete.hpp>
#include <quadinfo/measures.hpp>
#include <quadinfo/rng.hpp>
#include <quadinfo/simulate.hpp>
#include <quadinfo/szego.hpp>

#ifdef QUADINFO_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>

namespace quadinfo::cli {

namespace {

struct EstimateArgs {
    std::string input = "-";
    std::string estimator = "analog";
    std::optional<double> sigma2, alpha, silverman_p;
    std::optional<int> dim;
    double k = 3.0;
    double q = 2.5;
    bool bias_reduce = false;
    std::optional<std::size_t> shift;
    std::uint64_t seed = 1;
    bool raw_scale = false;
    std::optional<std::size_t> nx, ny;
};

struct SweepArgs {
    std::string scenario = "custom";
    ExperimentPlan plan;
    SweepOptions opt;
};

struct GenArgs {
    std::string source;
    std::optional<double> r, smi, rho;
    std::size_t L = 0;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    double contaminate = 0.0;
    std::size_t nx = 4, ny = 4;
    double dirichlet = 1.0;
    std::uint64_t channel = 0;
    std::string out;
};

struct GenieArgs {
    std::string source;
    std::optional<double> r, smi, rho;
    double sigma2 = 0.0;
    std::size_t samples = 200000;
    std::uint64_t seed = 1;
    bool control_variate = false;
    std::size_t nx = 4, ny = 4;
    double dirichlet = 1.0;
    std::uint64_t channel = 0;
};

// Opens `path` for reading; "-" is the caller's stream.
class Input {
public:
    Input(const std::string& path, std::istream& fallback) {
        if (path == "-") {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ifstream>(path);
            if (!*file_) throw std::runtime_error("cannot open " + path);
            stream_ = file_.get();
        }
    }
    std::istream& get() { return *stream_; }

private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

double sample_sd(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m += e;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double e : v) s += (e - m) * (e - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

// Resolves sigma2, N and alpha from the flags. Standardized data has
// sigma_x = 1; raw-scale data uses the sample standard deviation of x.
analog::FeatureConfig resolve_config(const EstimateArgs& a, const analog::RealPairedSamples& s) {
    const double sx = a.raw_scale ? sample_sd(s.x()) : 1.0;
    if (!(sx > 0.0)) throw std::invalid_argument("x has zero spread; raw-scale parameters cannot be derived");
    analog::FeatureConfig cfg;
    cfg.standardize = !a.raw_scale;
    if (a.silverman_p)
        cfg.sigma2 = analog::sigma2_from_silverman(*a.silverman_p, s.size()) * sx * sx;
    else if (a.sigma2)
        cfg.sigma2 = *a.sigma2;
    else if (a.dim) {
        if (*a.dim < 3 || *a.dim % 2 == 0) throw std::invalid_argument("--dim must be odd and >= 3");
        const double sigma = a.k * a.q * sx / ((*a.dim - 1) / 2);
        cfg.sigma2 = sigma * sigma;
    } else
        cfg.sigma2 = 0.1 * sx * sx;
    if (!(cfg.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    cfg.dimension = a.dim ? *a.dim : analog::dimension_from_sigma(a.k, a.q, sx, std::sqrt(cfg.sigma2));
    cfg.alpha = a.alpha ? *a.alpha : 1.0 / (a.q * sx);
    cfg.validate();
    return cfg;
}

int do_estimate(const EstimateArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    Input input(a.input, in);
    const std::vector<std::string> header = {"estimator", "value", "N", "sigma2", "alpha", "L"};

    if (a.estimator == "discrete" || a.estimator == "hgr") {
        const auto s = read_symbol_pairs(input.get(), a.nx, a.ny);
        discrete::Degeneracy deg;
        const double v = a.estimator == "discrete" ? discrete::smi_plugin_simplex(s, &deg) : discrete::hgr_plugin(s, &deg);
        if (deg.degenerate())
            err << "warning: " << deg.unseen_x << " x and " << deg.unseen_y
                << " y symbols never occur; the estimate uses the observed alphabet\n";
        out << join_record(header) << "\n"
            << join_record({a.estimator, format_number(v), "", "", "", std::to_string(s.size())}) << "\n";
        return 0;
    }

    const auto s = read_real_pairs(input.get());
    if (s.size() < 2) throw std::invalid_argument("need at least 2 samples");
    const auto cfg = resolve_config(a, s);
    std::string name = a.estimator;
    double value = 0.0;
    if (a.bias_reduce) {
        if (a.estimator != "analog") throw std::invalid_argument("--bias-reduce applies to the analog estimator only");
        name = "bias_reduced";
        const auto br = analog::smi_bias_reduced(s, cfg, a.shift);
        value = br.value;
    } else {
        const auto e = a.estimator == "fast" ? szego::smi_analog_fast(s, cfg) : analog::smi_analog(s, cfg);
        for (const auto& w : e.diagnostics.warnings()) err << "warning: " << w << "\n";
        value = e.value;
    }
    out << join_record(header) << "\n"
        << join_record({name, format_number(value), std::to_string(cfg.dimension), format_number(cfg.sigma2),
                        format_number(cfg.alpha), std::to_string(s.size())})
        << "\n";
    return 0;
}

double mixture_dependence(const std::optional<double>& r, const std::optional<double>& smi) {
    if (r) return *r;
    if (smi) return simulate::GmmSpec::dependence_for_smi(*smi);
    throw std::invalid_argument("gmm needs --r or --smi");
}

simulate::BivariateMixture mixture_source(const std::string& source, const std::optional<double>& r,
                                          const std::optional<double>& smi, const std::optional<double>& rho) {
    if (source == "gmm") return simulate::GmmSpec(mixture_dependence(r, smi)).mixture();
    if (!rho) throw std::invalid_argument("gaussian needs --rho");
    if (!(*rho > -1.0 && *rho < 1.0)) throw std::invalid_argument("--rho must lie in (-1, 1)");
    return simulate::BivariateMixture::gaussian(*rho);
}

int do_gen(const GenArgs& a, std::ostream& out) {
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open " + a.out + " for writing");
    }
    std::ostream& sink = a.out.empty() ? out : file;
    if (a.L < 1) throw std::invalid_argument("--L must be >= 1");
    Engine eng = make_engine(a.seed, a.stream);
    sink << "x,y\n";

    if (a.source == "dmc") {
        const auto spec = simulate::random_dmc(a.nx, a.ny, a.seed, a.dirichlet, kGenieStream + a.channel);
        const auto s = simulate::sample_dmc(spec, a.L, eng);
        for (std::size_t l = 0; l < s.size(); ++l) sink << s.x()[l] << "," << s.y()[l] << "\n";
    } else {
        if (!(a.contaminate >= 0.0)) throw std::invalid_argument("--contaminate must be >= 0");
        const auto m = mixture_source(a.source, a.r, a.smi, a.rho);
        const auto s = m.sample(a.L, eng);
        std::normal_distribution<double> noise(0.0, std::sqrt(a.contaminate));
        for (std::size_t l = 0; l < s.size(); ++l) {
            double x = s.x()[l], y = s.y()[l];
            if (a.contaminate > 0.0) {
                x += noise(eng);
                y += noise(eng);
            }
            sink << format_number(x) << "," << format_number(y) << "\n";
        }
    }
    sink.flush();
    if (!sink) throw std::runtime_error("write failed");
    return 0;
}

int do_genie(const GenieArgs& a, std::ostream& out) {
    out << "quantity,value,std_error\n";
    if (a.source == "dmc") {
        const auto j = simulate::random_dmc(a.nx, a.ny, a.seed, a.dirichlet, kGenieStream + a.channel).joint();
        const double smi = measures::smi_exact(j), mi = measures::shannon_mi(j);
        out << "smi," << format_number(smi) << ",0\n"
            << "mi," << format_number(mi) << ",0\n"
            << "local_ratio," << format_number(smi / (2.0 * mi)) << ",0\n";
        return 0;
    }
    simulate::GenieConfig gc;
    gc.mc_samples = a.samples;
    gc.seed = a.seed;
    gc.sigma2 = a.sigma2;
    gc.control_variate = a.control_variate;
    const auto g = simulate::genie(mixture_source(a.source, a.r, a.smi, a.rho), gc);
    out << "smi," << format_number(g.smi.value) << "," << format_number(g.smi.std_error) << "\n"
        << "mi," << format_number(g.mi.value) << "," << format_number(g.mi.std_error) << "\n"
        << "local_ratio," << format_number(g.local_ratio.value) << "," << format_number(g.local_ratio.std_error)
        << "\n";
    return 0;
}

void add_seed(CLI::App* app, std::uint64_t& seed) {
    app->add_option("--seed", seed, "Root seed (default from QUADINFO_SEED, else 1)")->envname("QUADINFO_SEED");
}

bool given(const std::vector<std::string>& argv, const std::string& flag) {
    return std::any_of(argv.begin(), argv.end(), [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Turns the entries of a key = value file into command-line options placed
// right after the subcommand name. Keys already on the command line win.
void splice_config(CLI::App* sub, const std::string& file_flag, std::vector<std::string>& argv) {
    std::string path;
    for (std::size_t i = 1; i < argv.size(); ++i) {
        if (argv[i] == file_flag && i + 1 < argv.size()) path = argv[i + 1];
        else if (argv[i].rfind(file_flag + "=", 0) == 0) path = argv[i].substr(file_flag.size() + 1);
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::vector<std::string> extra;
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        const std::string flag = "--" + item.name;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || flag == file_flag) throw std::runtime_error(path + ": unknown key '" + item.name + "'");
        if (given(argv, flag)) continue;
        if (opt->get_expected_min() == 0) {
            if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "1")) extra.push_back(flag);
            continue;
        }
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
        extra.push_back(flag + "=" + value);
    }
    argv.insert(argv.begin() + 1, extra.begin(), extra.end());
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Squared-loss mutual information estimation and experiment sweeps", "quadinfo"};
    app.require_subcommand(1);

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate", "Estimate SMI from a two-column x,y CSV");
    std::string config_path;
    est->add_option("--config", config_path, "key = value file with the options below");
    est->add_option("input", ea.input, "CSV path, - for standard input")->capture_default_str();
    est->add_option("--estimator", ea.estimator, "analog, fast, discrete or hgr")
        ->check(CLI::IsMember({"analog", "fast", "discrete", "hgr"}))
        ->capture_default_str();
    auto* o_sigma2 = est->add_option("--sigma2", ea.sigma2, "Smoothing variance");
    est->add_option("--alpha", ea.alpha, "Frequency sampling period (default 1/(q sigma_x))");
    auto* o_dim = est->add_option("--dim", ea.dim, "Feature dimension N, odd");
    auto* o_k = est->add_option("--k", ea.k, "Support factor of the dimension rule")->capture_default_str();
    auto* o_q = est->add_option("--q", ea.q, "Dynamic-range factor of the dimension rule")->capture_default_str();
    auto* o_p = est->add_option("--silverman-p", ea.silverman_p, "sigma2 = p L^(-2/5)");
    est->add_flag("--bias-reduce", ea.bias_reduce, "Subtract the circularly shifted floor");
    est->add_option("--shift", ea.shift, "Circular shift for --bias-reduce (default floor(L/2))");
    add_seed(est, ea.seed);
    est->add_flag("--raw-scale", ea.raw_scale, "Skip standardization; sigma_x is the sample SD of x");
    est->add_option("--nx", ea.nx, "x alphabet size for discrete input");
    est->add_option("--ny", ea.ny, "y alphabet size for discrete input");
    o_dim->excludes(o_k)->excludes(o_q);
    o_p->excludes(o_sigma2);

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "Run an experiment grid and write one record per cell and estimator");
    std::string plan_path;
    sw->add_option("--plan", plan_path, "key = value plan file with the options below");
    sw->add_option("--scenario", sa.scenario, "fig3, fig5, fig6, fig8 or custom")->capture_default_str();
    ExperimentPlan& pl = sa.plan;
    auto* o_smi = sw->add_option("--smi", pl.smi, "SMI targets of the +-r mixture")->delimiter(',');
    auto* o_r = sw->add_option("--r", pl.r, "Mixture dependence values")->delimiter(',');
    auto* o_L = sw->add_option("--L", pl.L, "Sample sizes")->delimiter(',');
    auto* o_s2 = sw->add_option("--sigma2", pl.sigma2, "Smoothing variances")->delimiter(',');
    auto* o_sp = sw->add_option("--p", pl.p, "Silverman factors, sigma2 = p L^(-2/5)")->delimiter(',');
    auto* o_N = sw->add_option("--N", pl.N, "Feature dimensions (default from k, q)")->delimiter(',');
    std::optional<double> sweep_alpha;
    auto* o_alpha = sw->add_option("--alpha", sweep_alpha, "Frequency sampling period (default 1/q)");
    auto* o_sk = sw->add_option("--k", pl.k, "Support factor");
    auto* o_sq = sw->add_option("--q", pl.q, "Dynamic-range factor");
    auto* o_est = sw->add_option("--estimators", pl.estimators, "analog, fast, bias_reduced; fig3: ratio, discrete")
                      ->delimiter(',');
    auto* o_trials = sw->add_option("--trials", pl.trials, "Trials per cell");
    add_seed(sw, pl.seed);
    auto* o_gs = sw->add_option("--genie-samples", pl.genie_samples, "Monte-Carlo samples of the genie reference");
    auto* o_ch = sw->add_option("--channels", pl.channels, "fig3: number of random 4x4 channels");
    auto* o_dlo = sw->add_option("--dirichlet-lo", pl.dirichlet_lo, "fig3: smallest column concentration");
    auto* o_dhi = sw->add_option("--dirichlet-hi", pl.dirichlet_hi, "fig3: largest column concentration");
    sw->add_option("--out", sa.opt.out, "Output CSV (default standard output)");
    sw->add_option("--jobs", sa.opt.jobs, "Worker threads, 0 for all cores")->capture_default_str();
    sw->add_flag("--resume", sa.opt.resume, "Keep complete cells of an existing --out file");
    o_r->excludes(o_smi);
    o_sp->excludes(o_s2);

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "Draw paired samples from a synthetic source as x,y CSV");
    gen->add_option("source", ga.source, "gmm, gaussian or dmc")
        ->required()
        ->check(CLI::IsMember({"gmm", "gaussian", "dmc"}));
    auto* g_r = gen->add_option("--r", ga.r, "gmm: dependence in [0, 1)");
    gen->add_option("--smi", ga.smi, "gmm: SMI target")->excludes(g_r);
    gen->add_option("--rho", ga.rho, "gaussian: correlation");
    gen->add_option("--L", ga.L, "Number of pairs")->required();
    add_seed(gen, ga.seed);
    gen->add_option("--stream", ga.stream, "Substream index")->capture_default_str();
    gen->add_option("--contaminate", ga.contaminate, "Variance of added N(0, s) noise on both coordinates");
    gen->add_option("--nx", ga.nx, "dmc: input alphabet size")->capture_default_str();
    gen->add_option("--ny", ga.ny, "dmc: output alphabet size")->capture_default_str();
    gen->add_option("--dirichlet", ga.dirichlet, "dmc: column concentration")->capture_default_str();
    gen->add_option("--channel", ga.channel, "dmc: channel index")->capture_default_str();
    gen->add_option("--out", ga.out, "Output CSV (default standard output)");

    GenieArgs gn;
    auto* gen_ie = app.add_subcommand("genie", "Monte-Carlo SMI and MI of a source with known density");
    gen_ie->add_option("source", gn.source, "gmm, gaussian or dmc")
        ->required()
        ->check(CLI::IsMember({"gmm", "gaussian", "dmc"}));
    auto* n_r = gen_ie->add_option("--r", gn.r, "gmm: dependence in [0, 1)");
    gen_ie->add_option("--smi", gn.smi, "gmm: SMI target")->excludes(n_r);
    gen_ie->add_option("--rho", gn.rho, "gaussian: correlation");
    gen_ie->add_option("--sigma2", gn.sigma2, "Contamination variance")->capture_default_str();
    gen_ie->add_option("--samples", gn.samples, "Monte-Carlo samples")->capture_default_str();
    add_seed(gen_ie, gn.seed);
    gen_ie->add_flag("--control-variate", gn.control_variate, "Add the zero-mean control to both averages");
    gen_ie->add_option("--nx", gn.nx, "dmc: input alphabet size")->capture_default_str();
    gen_ie->add_option("--ny", gn.ny, "dmc: output alphabet size")->capture_default_str();
    gen_ie->add_option("--dirichlet", gn.dirichlet, "dmc: column concentration")->capture_default_str();
    gen_ie->add_option("--channel", gn.channel, "dmc: channel index")->capture_default_str();

    std::vector<std::string> argv = args;
    try {
        if (!argv.empty() && argv[0] == "estimate") splice_config(est, "--config", argv);
        if (!argv.empty() && argv[0] == "sweep") splice_config(sw, "--plan", argv);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        std::vector<std::string> rev(argv.rbegin(), argv.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*est) return do_estimate(ea, in, out, err);
        if (*gen) return do_gen(ga, out);
        if (*gen_ie) return do_genie(gn, out);

        // Options left unset keep the scenario's preset.
        ExperimentPlan plan = preset(sa.scenario);
        const auto take = [](CLI::Option* o, auto& dst, const auto& src) {
            if (o->count() > 0) dst = src;
        };
        take(o_smi, plan.smi, pl.smi);
        take(o_r, plan.r, pl.r);
        if (o_r->count() > 0) plan.smi.clear();
        if (o_smi->count() > 0) plan.r.clear();
        take(o_L, plan.L, pl.L);
        take(o_s2, plan.sigma2, pl.sigma2);
        take(o_sp, plan.p, pl.p);
        if (o_sp->count() > 0) plan.sigma2.clear();
        if (o_s2->count() > 0) plan.p.clear();
        take(o_N, plan.N, pl.N);
        if (o_alpha->count() > 0) plan.alpha = sweep_alpha;
        take(o_sk, plan.k, pl.k);
        take(o_sq, plan.q, pl.q);
        take(o_est, plan.estimators, pl.estimators);
        take(o_trials, plan.trials, pl.trials);
        plan.seed = pl.seed;
        take(o_gs, plan.genie_samples, pl.genie_samples);
        take(o_ch, plan.channels, pl.channels);
        take(o_dlo, plan.dirichlet_lo, pl.dirichlet_lo);
        take(o_dhi, plan.dirichlet_hi, pl.dirichlet_hi);
        const std::size_t failed = run_sweep(plan, sa.opt, out, err);
        if (failed > 0) {
            err << failed << " cell(s) failed\n";
            return 3;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace quadinfo::cli
