#include <benchmark/benchmark.h>

#include <vector>

#include "tsadam/optim.hpp"
#include "tsadam/rng.hpp"
#include "tsadam/synth.hpp"

namespace {

// Step throughput of the corrected vs uncorrected update at several
// parameter counts; the interesting number is the per-element gap.
void bench_step(benchmark::State& state, tsadam::optim::Family family) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const tsadam::optim::OptimizerSpec spec = tsadam::optim::default_spec(family);
    std::vector<double> theta(n, 0.1);
    std::vector<double> grad(n);
    tsadam::Rng rng(7);
    for (double& g : grad) g = rng.normal();
    tsadam::optim::OptimizerState st = tsadam::optim::init_state(n, spec);
    for (auto _ : state) {
        tsadam::optim::step(spec, st, {theta, grad});
        benchmark::DoNotOptimize(theta.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
}

void BM_adam_step(benchmark::State& state) {
    bench_step(state, tsadam::optim::Family::Adam);
}
void BM_tsadam_step(benchmark::State& state) {
    bench_step(state, tsadam::optim::Family::TSAdam);
}
void BM_sgd_step(benchmark::State& state) {
    bench_step(state, tsadam::optim::Family::SGD);
}

void BM_series_generate(benchmark::State& state) {
    tsadam::synth::SeriesSpec spec;
    spec.sigma_eps = 0.1;
    spec.sigma_r = 0.5;
    spec.period = 24;
    spec.seasonal.assign(24, 0.0);
    spec.length = state.range(0);
    spec.seed = 42;
    for (auto _ : state) {
        auto sample = tsadam::synth::generate(spec, false);
        benchmark::DoNotOptimize(sample.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_adam_step)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_tsadam_step)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_sgd_step)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_series_generate)->Arg(1 << 12)->Arg(1 << 16);

BENCHMARK_MAIN();
