#include <benchmark/benchmark.h>

#include "stopflow/atlas.hpp"
#include "stopflow/dsge.hpp"
#include "stopflow/dynamics.hpp"
#include "stopflow/hitting_map.hpp"
#include "stopflow/planar.hpp"

namespace {

using namespace stopflow;

void BM_StepLoop(benchmark::State& state) {
    const auto p = PlanarParams::from_lambda_beta(-0.5, 2.0);
    PlanarState st{0.3, 0.1};
    for (auto _ : state) {
        for (int i = 0; i < 1000; ++i) st = advance(p, st);
        benchmark::DoNotOptimize(st);
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_StepLoop);

void BM_FastForwardCaseF(benchmark::State& state) {
    const auto p = PlanarParams::from_lambda_beta(-0.5, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fast_forward(p, {3.0, 0.2}, static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(BM_FastForwardCaseF)->Arg(1'000'000)->Arg(10'000'000'000);

void BM_DetectAttractor(benchmark::State& state) {
    const auto p = PlanarParams::from_lambda_beta(-2.0 / 3.0, 2.0);
    const DetectionConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(detect_attractor(p, {0.3, 0.1}, cfg));
}
BENCHMARK(BM_DetectAttractor);

void BM_SweepCell(benchmark::State& state) {
    DetectionConfig cfg;
    cfg.tol = 1e-8;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_cell(-0.3, -1.5, 20, cfg));
}
BENCHMARK(BM_SweepCell);

void BM_BuildT(benchmark::State& state) {
    const auto p = PlanarParams::from_lambda_beta(-0.4, 1.5);
    const int k_max = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_T(p, k_max));
}
BENCHMARK(BM_BuildT)->Arg(10)->Arg(50)->Arg(200);

void BM_EvalT(benchmark::State& state) {
    const auto p = PlanarParams::from_lambda_beta(-0.4, 1.5);
    const auto T = build_T(p, 200);
    double x = p.x_star() + 0.37;
    for (auto _ : state) benchmark::DoNotOptimize(T(x));
}
BENCHMARK(BM_EvalT);

void BM_DsgeStep(benchmark::State& state) {
    const auto p = *dsge_preset("fig7b");
    auto st = dsge_preset_start(p);
    for (auto _ : state) {
        st = dsge_step(p, st);
        benchmark::DoNotOptimize(st);
    }
}
BENCHMARK(BM_DsgeStep);

}  // namespace

BENCHMARK_MAIN();
