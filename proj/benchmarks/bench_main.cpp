#include <benchmark/benchmark.h>

#include "arlkit/arlkit.hpp"

using namespace arlkit;

static void BM_OrthantBelow(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix R = correlation_matrix(make_ma_weights(16), n);
    for (auto _ : state) benchmark::DoNotOptimize(mvn_orthant_below(R, 2.0));
}
BENCHMARK(BM_OrthantBelow)->RangeMultiplier(2)->Range(2, 32)->Unit(benchmark::kMillisecond);

static void BM_StationarySurvival(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix R = correlation_matrix(make_ma_weights(16), n);
    for (auto _ : state) benchmark::DoNotOptimize(mvn_stationary_survival(R, 3.0));
}
BENCHMARK(BM_StationarySurvival)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMillisecond);

static void BM_ArlEstimate(benchmark::State& state) {
    const MosumSpec spec(make_ma_weights(static_cast<std::size_t>(state.range(0))), 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(arl_estimate(spec));
}
BENCHMARK(BM_ArlEstimate)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_RunLength(benchmark::State& state) {
    const MosumSpec spec(make_fd_weights(static_cast<std::size_t>(state.range(0))), 2.0);
    Xoshiro256pp stream(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_run_length(spec, {}, stream));
}
BENCHMARK(BM_RunLength)->Arg(4)->Arg(16)->Arg(64);

static void BM_SimulateArl(benchmark::State& state) {
    const MosumSpec spec(make_ma_weights(8), 2.0);
    McConfig cfg;
    cfg.replications = 10'000;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_arl(spec, cfg));
}
BENCHMARK(BM_SimulateArl)->Unit(benchmark::kMillisecond);

static void BM_ZigzagTriangle(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(exact::zigzag_numbers(m));
}
BENCHMARK(BM_ZigzagTriangle)->Arg(20)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
