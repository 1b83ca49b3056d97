// Serial reference vs OpenMP execution of the ensemble kernels.
// Arg 0 selects the execution policy: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "rmc/attractor.hpp"
#include "rmc/verification.hpp"

namespace {

using rmc::DrivingSystem;
using rmc::Execution;

DrivingSystem telegraph(std::uint64_t seed) {
    return DrivingSystem::telegraph(std::vector<double>(8, 0.5), std::vector<double>(8, 2.0), 1.0, seed);
}

Execution policy(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(rmc::available_threads()));
}

void BM_AttractorPath(benchmark::State& state) {
    const auto d = telegraph(1);
    std::vector<double> times;
    for (int k = 0; k <= 16; ++k) times.push_back(2.5 * k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rmc::attractor_path(d, times, 40.0, 1e-8, 1e-3, policy(state)));
    }
    label(state);
}

void BM_Contraction(benchmark::State& state) {
    const auto d = telegraph(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rmc::estimate_contraction(d, 1.0, 2000, 2, 1e-3, policy(state)));
    }
    label(state);
}

void BM_SeedSweepPullback(benchmark::State& state) {
    std::vector<DrivingSystem> drivers;
    for (std::uint64_t s = 0; s < 16; ++s) drivers.push_back(telegraph(s));
    rmc::SuiteSettings settings;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rmc::check_pullback(drivers, settings, policy(state)));
    }
    label(state);
}

}  // namespace

BENCHMARK(BM_AttractorPath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Contraction)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeedSweepPullback)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
