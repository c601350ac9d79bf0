// Serial reference against the OpenMP kernels: moment sweep and sign raster.

#include "qpl/contour/contour.hpp"
#include "qpl/orthopoly/orthopoly.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace qpl;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_moments(benchmark::State& state) {
    const auto ctx = PrecisionContext::make(static_cast<int>(state.range(1)));
    PrecisionGuard g(ctx);
    const auto spec = make_spec(Real(-1) / 24, 16, Complex(Real(1) / 2), Complex(Real("0.3")));
    for (auto _ : state) benchmark::DoNotOptimize(compute_moments(spec, 34, ctx, mode(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_raster(benchmark::State& state) {
    const auto ctx = PrecisionContext::make(30);
    PrecisionGuard g(ctx);
    const int n = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(region_sign_map(PhiFunction::critical_cr(), BoundingBox{}, n, n, ctx, mode(state)));
    }
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_moments)->ArgsProduct({{0, 1}, {60, 120}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_raster)->ArgsProduct({{0, 1}, {17, 33}})->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
