#include "quadinfo/cli/sweep.hpp"

#include "quadinfo/cli/csv.hpp"

#include <quadinfo/analog.hpp>
#include <quadinfo/discrete.hpp>
#include <quadinfo/measures.hpp>
#include <quadinfo/rng.hpp>
#include <quadinfo/simulate.hpp>
#include <quadinfo/szego.hpp>

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace quadinfo::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Concentration draw of fig3 channel c.
constexpr std::uint64_t kChannelStream = std::uint64_t{1} << 41;

bool is_gmm_estimator(const std::string& e) { return e == "analog" || e == "fast" || e == "bias_reduced"; }
bool is_channel_estimator(const std::string& e) { return e == "ratio" || e == "discrete"; }

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased; 0 for a single trial
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    for (double e : v) m.mean += e;
    m.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        for (double e : v) m.variance += (e - m.mean) * (e - m.mean);
        m.variance /= static_cast<double>(v.size() - 1);
    }
    return m;
}

struct Record {
    std::string estimator;
    std::size_t trials = 0;
    Moments m;
    double genie_smi = kNaN, genie_smi_se = kNaN, genie_mi = kNaN, genie_mi_se = kNaN;
    double reference = kNaN;  // genie the bias is measured against
    double gap = kNaN;
};

std::string size_text(std::size_t v) { return std::to_string(v); }

std::string format_record(const ExperimentPlan& plan, const Cell& c, const Record& r) {
    const double n = static_cast<double>(r.trials);
    const double bias = r.m.mean - r.reference;
    const double mse = r.m.variance * (n - 1.0) / n + bias * bias;
    const bool ref = std::isfinite(r.reference) && r.reference != 0.0;
    return join_record({
               plan.scenario,
               size_text(c.index),
               format_number(c.smi_target),
               format_number(c.r),
               c.L ? size_text(c.L) : "",
               format_number(c.sigma2),
               format_number(c.p),
               c.N ? std::to_string(c.N) : "",
               format_number(c.alpha),
               r.estimator,
               size_text(r.trials),
               format_number(r.m.mean),
               format_number(r.m.variance),
               format_number(ref ? bias / r.reference : kNaN),
               format_number(ref ? r.m.variance / (r.reference * r.reference) : kNaN),
               format_number(std::isfinite(r.reference) ? mse : kNaN),
               format_number(r.genie_smi),
               format_number(r.genie_smi_se),
               format_number(r.genie_mi),
               format_number(r.genie_mi_se),
               format_number(r.gap),
               format_number(c.dirichlet),
               std::to_string(plan.seed),
               std::to_string(c.index * kCellStride),
           }) +
           "\n";
}

std::string gmm_cell(const ExperimentPlan& plan, const Cell& c) {
    analog::FeatureConfig cfg;
    cfg.sigma2 = c.sigma2;
    cfg.alpha = c.alpha;
    cfg.dimension = c.N;
    cfg.validate();

    const simulate::GmmSpec spec(c.r);
    simulate::GenieConfig gc;
    gc.mc_samples = plan.genie_samples;
    gc.seed = substream_seed(plan.seed, kGenieStream + c.index);
    gc.sigma2 = c.sigma2;
    const auto genie = simulate::genie(spec.mixture(), gc);

    const auto has = [&](const char* e) {
        return std::find(plan.estimators.begin(), plan.estimators.end(), e) != plan.estimators.end();
    };
    const bool need_stats = has("analog") || has("fast");
    std::vector<double> exact, fast, gap, reduced;
    for (std::size_t t = 0; t < plan.trials; ++t) {
        const auto s = simulate::gmm_sample(spec, c.L, plan.seed, c.index * kCellStride + t);
        if (need_stats) {
            const auto st = analog::compute_feature_stats(s, cfg);
            exact.push_back(analog::smi_from_stats(st).value);
            if (has("fast")) {
                fast.push_back(szego::smi_fast_from_stats(st).value);
                gap.push_back(std::abs(fast.back() - exact.back()));
            }
        }
        if (has("bias_reduced")) reduced.push_back(analog::smi_bias_reduced(s, cfg).value);
    }

    std::string out;
    for (const auto& e : plan.estimators) {
        Record r;
        r.estimator = e;
        r.trials = plan.trials;
        r.genie_smi = r.reference = genie.smi.value;
        r.genie_smi_se = genie.smi.std_error;
        r.genie_mi = genie.mi.value;
        r.genie_mi_se = genie.mi.std_error;
        if (e == "analog") {
            r.m = moments(exact);
        } else if (e == "fast") {
            r.m = moments(fast);
            r.gap = moments(gap).mean;
        } else {
            r.m = moments(reduced);
        }
        out += format_record(plan, c, r);
    }
    return out;
}

std::string channel_cell(const ExperimentPlan& plan, const Cell& c) {
    const auto spec = simulate::random_dmc(4, 4, plan.seed, c.dirichlet, c.index);
    const auto j = spec.joint();
    const double smi = measures::smi_exact(j);
    const double mi = measures::shannon_mi(j);

    std::string out;
    for (const auto& e : plan.estimators) {
        Record r;
        r.estimator = e;
        r.genie_smi = smi;
        r.genie_mi = mi;
        r.genie_smi_se = r.genie_mi_se = 0.0;
        if (e == "ratio") {
            r.trials = 1;
            r.m.mean = smi / (2.0 * mi);
        } else {
            if (c.L == 0) throw std::invalid_argument("the discrete estimator needs a sample size L");
            std::vector<double> v;
            for (std::size_t t = 0; t < plan.trials; ++t) {
                Engine eng = make_engine(plan.seed, c.index * kCellStride + t);
                v.push_back(discrete::smi_plugin_simplex(simulate::sample_dmc(spec, c.L, eng)));
            }
            r.trials = plan.trials;
            r.m = moments(v);
            r.reference = smi;
        }
        out += format_record(plan, c, r);
    }
    return out;
}

}  // namespace

void ExperimentPlan::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (estimators.empty()) throw std::invalid_argument("no estimators selected");
    if (scenario == "fig3") {
        if (channels < 1) throw std::invalid_argument("fig3 needs channels >= 1");
        if (!(dirichlet_lo > 0.0 && dirichlet_hi >= dirichlet_lo))
            throw std::invalid_argument("need 0 < dirichlet-lo <= dirichlet-hi");
        for (const auto& e : estimators)
            if (!is_channel_estimator(e)) throw std::invalid_argument("fig3 supports the ratio and discrete estimators, not '" + e + "'");
        return;
    }
    for (const auto& e : estimators)
        if (!is_gmm_estimator(e)) throw std::invalid_argument("unknown estimator '" + e + "'");
    if (smi.empty() && r.empty()) throw std::invalid_argument("empty dependence grid: give smi targets or r values");
    if (L.empty()) throw std::invalid_argument("empty sample-size grid L");
    if (sigma2.empty() && p.empty()) throw std::invalid_argument("empty smoothing grid: give sigma2 or p");
    for (double v : smi)
        if (!(v >= 0.0 && std::isfinite(v))) throw std::invalid_argument("smi targets must be finite and >= 0");
    for (double v : r)
        if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("r must lie in [0, 1)");
    for (auto v : L)
        if (v < 2) throw std::invalid_argument("L must be >= 2");
    for (double v : sigma2)
        if (!(v > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    for (double v : p)
        if (!(v > 0.0)) throw std::invalid_argument("p must be > 0");
    for (int n : N)
        if (n < 3 || n % 2 == 0) throw std::invalid_argument("N must be odd and >= 3");
    if (alpha && !(*alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!(k > 0.0 && q > 0.0)) throw std::invalid_argument("k and q must be > 0");
}

ExperimentPlan preset(const std::string& scenario) {
    ExperimentPlan p;
    p.scenario = scenario;
    if (scenario == "fig3") {
        p.channels = 1000;
        p.estimators = {"ratio"};
    } else if (scenario == "fig5") {
        p.smi = {0.05, 0.1, 0.2, 0.5, 1.0};
        p.L = {1000, 10000};
        p.sigma2 = {0.1, 0.4};
        p.alpha = 1.0 / 3.0;
        p.trials = 20;
        p.estimators = {"analog"};
    } else if (scenario == "fig6") {
        p.smi = {0.1};
        p.L = {250, 500, 1000, 2000, 4000};
        p.p = {0.25};
        p.alpha = 1.0 / 3.0;
        p.trials = 50;
        p.estimators = {"analog", "bias_reduced"};
    } else if (scenario == "fig8") {
        p.smi = {1.0};
        p.L = {100000};
        p.sigma2 = {0.1, 0.4};
        p.N = {17, 31, 61};
        p.alpha = 1.0 / 3.0;
        p.trials = 3;
        p.estimators = {"analog", "fast"};
    } else if (scenario == "custom") {
        p.estimators = {"analog"};
    } else {
        throw std::invalid_argument("unknown scenario '" + scenario + "' (fig3, fig5, fig6, fig8, custom)");
    }
    return p;
}

std::vector<Cell> expand(const ExperimentPlan& plan) {
    plan.validate();
    std::vector<Cell> cells;
    if (plan.scenario == "fig3") {
        const std::vector<std::size_t> sizes = plan.L.empty() ? std::vector<std::size_t>{0} : plan.L;
        for (std::size_t ch = 0; ch < plan.channels; ++ch) {
            Engine eng = make_engine(plan.seed, kChannelStream + ch);
            std::uniform_real_distribution<double> u(std::log10(plan.dirichlet_lo), std::log10(plan.dirichlet_hi));
            const double conc = std::pow(10.0, u(eng));
            for (auto L : sizes) {
                Cell c;
                c.index = cells.size();
                c.smi_target = c.r = c.sigma2 = c.p = c.alpha = kNaN;
                c.L = L;
                c.dirichlet = conc;
                cells.push_back(c);
            }
        }
        return cells;
    }

    std::vector<std::pair<double, double>> deps;  // (smi target, r)
    if (!plan.r.empty())
        for (double r : plan.r) deps.emplace_back(kNaN, r);
    else
        for (double s : plan.smi) deps.emplace_back(s, simulate::GmmSpec::dependence_for_smi(s));

    for (const auto& [target, r] : deps) {
        for (auto L : plan.L) {
            std::vector<std::pair<double, double>> smooth;  // (sigma2, p)
            if (!plan.p.empty())
                for (double p : plan.p) smooth.emplace_back(analog::sigma2_from_silverman(p, L), p);
            else
                for (double s2 : plan.sigma2) smooth.emplace_back(s2, kNaN);
            for (const auto& [s2, p] : smooth) {
                std::vector<int> dims = plan.N;
                if (dims.empty()) dims = {analog::dimension_from_sigma(plan.k, plan.q, 1.0, std::sqrt(s2))};
                for (int n : dims) {
                    Cell c;
                    c.index = cells.size();
                    c.smi_target = target;
                    c.r = r;
                    c.L = L;
                    c.sigma2 = s2;
                    c.p = p;
                    c.N = n;
                    c.alpha = plan.alpha.value_or(1.0 / plan.q);
                    c.dirichlet = kNaN;
                    cells.push_back(c);
                }
            }
        }
    }
    return cells;
}

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "scenario",  "cell",          "smi_target",     "r",         "L",
        "sigma2",    "p",             "N",              "alpha",     "estimator",
        "trials",    "mean",          "variance",       "normalized_bias", "normalized_variance",
        "mse",       "genie_smi",     "genie_smi_se",   "genie_mi",  "genie_mi_se",
        "gap_vs_exact", "dirichlet",  "seed",           "first_stream",
    };
    return cols;
}

std::string run_cell(const ExperimentPlan& plan, const Cell& cell) {
    return plan.scenario == "fig3" ? channel_cell(plan, cell) : gmm_cell(plan, cell);
}

namespace {

// Complete cells of an earlier run, keyed by cell index.
std::map<std::size_t, std::string> load_previous(const std::string& path, const ExperimentPlan& plan) {
    std::map<std::size_t, std::string> done;
    std::ifstream in(path, std::ios::binary);
    if (!in) return done;
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.empty()) return done;
    // A record cut short by an interruption has no terminating newline.
    text.erase(text.find_last_of('\n') + 1);

    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    if (line != join_record(record_columns()))
        throw std::runtime_error(path + ": header does not match; refusing to resume into it");

    std::map<std::size_t, std::pair<std::size_t, std::string>> partial;
    while (std::getline(lines, line)) {
        const auto rec = split_record(line);
        if (rec.size() != record_columns().size()) continue;
        if (rec[0] != plan.scenario || rec[22] != std::to_string(plan.seed))
            throw std::runtime_error(path + ": records come from a different scenario or seed");
        const std::size_t cell = std::stoull(rec[1]);
        auto& slot = partial[cell];
        ++slot.first;
        slot.second += line + "\n";
    }
    for (auto& [cell, slot] : partial)
        if (slot.first == plan.estimators.size()) done.emplace(cell, std::move(slot.second));
    return done;
}

}  // namespace

std::size_t run_sweep(const ExperimentPlan& plan, const SweepOptions& opt, std::ostream& out, std::ostream& err) {
    const auto cells = expand(plan);
    std::map<std::size_t, std::string> previous;
    if (opt.resume && !opt.out.empty()) previous = load_previous(opt.out, plan);

    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open " + opt.out + " for writing");
    }
    std::ostream& sink = opt.out.empty() ? out : file;
    sink << join_record(record_columns()) << "\n";
    sink.flush();

    struct Slot {
        bool ready = false;
        std::string text;
        std::string error;
    };
    std::vector<Slot> slots(cells.size());
    std::mutex mu;
    std::condition_variable cv;
    std::size_t next = 0;

    const auto work = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                while (next < cells.size() && previous.count(next)) ++next;
                if (next >= cells.size()) return;
                i = next++;
            }
            Slot s;
            try {
                s.text = run_cell(plan, cells[i]);
            } catch (const std::exception& e) {
                s.error = e.what();
            }
            s.ready = true;
            {
                std::lock_guard lock(mu);
                slots[i] = std::move(s);
            }
            cv.notify_all();
        }
    };

    std::size_t jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(work);

    std::size_t failed = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string text, error;
        if (auto it = previous.find(i); it != previous.end()) {
            text = it->second;
        } else {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return slots[i].ready; });
            text = std::move(slots[i].text);
            error = std::move(slots[i].error);
        }
        if (!error.empty()) {
            err << "cell " << i << ": " << error << "\n";
            ++failed;
            continue;
        }
        sink << text;
        sink.flush();
        if (!sink) {
            err << "cell " << i << ": write failed\n";
            sink.clear();
            ++failed;
        }
    }
    for (auto& t : pool) t.join();
    return failed;
}

}  // namespace quadinfo::cli
