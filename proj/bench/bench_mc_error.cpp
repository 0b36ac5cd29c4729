// OpenMP Monte Carlo sample loop against the serial reference.

#include <benchmark/benchmark.h>

#include "ddex/analysis.hpp"
#include "ddex/problems.hpp"

namespace {

ddex::McConfig bench_config(int steps) {
    ddex::McConfig cfg;
    cfg.steps = steps;
    cfg.samples = 64;
    cfg.ref_factor = 16;
    cfg.seed = 7;
    return cfg;
}

const ddex::DDEProblem& bench_problem() {
    static const ddex::DDEProblem problem = ddex::make_f1(10.0, 100.0, 1.0, 5.0, 1.0, 2);
    return problem;
}

void BM_McErrorSerial(benchmark::State& state) {
    const auto cfg = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ddex::mc_error_serial(bench_problem(), cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.samples);
}

void BM_McErrorParallel(benchmark::State& state) {
    const auto cfg = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ddex::mc_error(bench_problem(), cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.samples);
}

}  // namespace

BENCHMARK(BM_McErrorSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_McErrorParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
