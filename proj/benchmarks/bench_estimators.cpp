#include <quadinfo/analog.hpp>
#include <quadinfo/discrete.hpp>
#include <quadinfo/simulate.hpp>
#include <quadinfo/szego.hpp>

#include <benchmark/benchmark.h>

using namespace quadinfo;

namespace {

analog::FeatureConfig config(int n) {
    analog::FeatureConfig c;
    c.sigma2 = 0.1;
    c.alpha = 1.0 / 3.0;
    c.dimension = n;
    return c;
}

const analog::RealPairedSamples& samples() {
    static const auto s = simulate::gmm_sample(simulate::GmmSpec(0.7), 20000, 1);
    return s;
}

void BM_FeatureStats(benchmark::State& st) {
    const auto cfg = config(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(analog::compute_feature_stats(samples(), cfg));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(samples().size()));
}
BENCHMARK(BM_FeatureStats)->Arg(17)->Arg(49)->Arg(127)->Unit(benchmark::kMillisecond);

void BM_ExactFromStats(benchmark::State& st) {
    const auto stats = analog::compute_feature_stats(samples(), config(static_cast<int>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(analog::smi_from_stats(stats).value);
}
BENCHMARK(BM_ExactFromStats)->Arg(17)->Arg(49)->Arg(127)->Arg(255)->Unit(benchmark::kMicrosecond);

void BM_FastFromStats(benchmark::State& st) {
    const auto stats = analog::compute_feature_stats(samples(), config(static_cast<int>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(szego::smi_fast_from_stats(stats).value);
}
BENCHMARK(BM_FastFromStats)->Arg(17)->Arg(49)->Arg(127)->Arg(255)->Unit(benchmark::kMicrosecond);

void BM_DiscreteSimplex(benchmark::State& st) {
    auto eng = make_engine(2);
    const auto spec = simulate::random_dmc(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(0)), 3);
    const auto s = simulate::sample_dmc(spec, 100000, eng);
    for (auto _ : st) benchmark::DoNotOptimize(discrete::smi_plugin_simplex(s));
}
BENCHMARK(BM_DiscreteSimplex)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_Genie(benchmark::State& st) {
    simulate::GenieConfig g;
    g.mc_samples = 100000;
    g.sigma2 = 0.1;
    const auto m = simulate::GmmSpec(0.7).mixture();
    for (auto _ : st) benchmark::DoNotOptimize(simulate::genie(m, g).smi.value);
}
BENCHMARK(BM_Genie)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
