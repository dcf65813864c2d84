// Serial reference vs the OpenMP bootstrap on the same synthetic history.

#include <benchmark/benchmark.h>

#include "ladderfolio/bootstrap.hpp"
#include "ladderfolio/synthetic.hpp"

namespace {

const ladderfolio::MarketHistory& history()
{
    static const auto h = [] {
        ladderfolio::SynthConfig cfg;
        cfg.n_securities = 50;
        cfg.n_years = 5;
        cfg.seed = 1;
        cfg.membership_churn_rate = 2.0;
        return ladderfolio::generate_synthetic(cfg);
    }();
    return h;
}

ladderfolio::BootstrapConfig config(benchmark::State& state)
{
    ladderfolio::BootstrapConfig cfg;
    cfg.n_mode = ladderfolio::FixedN{50};
    cfg.iterations = static_cast<std::size_t>(state.range(0));
    cfg.transform = ladderfolio::Transform::Sqrt;
    return cfg;
}

void BM_BootstrapSerial(benchmark::State& state)
{
    const auto cfg = config(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ladderfolio::run_bootstrap_serial(history(), cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BootstrapParallel(benchmark::State& state)
{
    const auto cfg = config(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ladderfolio::run_bootstrap(history(), cfg, static_cast<int>(state.range(1))));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BootstrapSerial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Args({200, 1})->Args({200, 2})->Args({200, 4})->Args({200, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
