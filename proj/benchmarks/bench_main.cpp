#include "wgf/floquet.hpp"
#include "wgf/markovian.hpp"
#include "wgf/propagator.hpp"

#include <benchmark/benchmark.h>

#include <numbers>
#include <variant>

using namespace wgf;

namespace {

SystemConfig harmonic(int L, double a) {
    SystemConfig c;
    c.array_size = L;
    c.beta = 0.2;
    c.beta1_static = 6.5;
    c.modulation = HarmonicCoupling{a, 8.0, 0.6};
    return c;
}

SystemConfig step(int L, double delta) {
    SystemConfig c;
    c.array_size = L;
    c.beta = 0.5;
    c.kappa12_static = 0.5;
    c.modulation = StepIndex{0.5, delta, 0.25 * std::numbers::pi, 0.1 * std::numbers::pi};
    return c;
}

void BM_PropagateHarmonic(benchmark::State& state) {
    const auto c = harmonic(static_cast<int>(state.range(0)), 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate(c, 10.0, 0.0, 100));
    }
    state.SetItemsProcessed(state.iterations() * 2000);  // RK4 steps
}
BENCHMARK(BM_PropagateHarmonic)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_PropagateStepExact(benchmark::State& state) {
    const auto c = step(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate_exact(c, 10.0, 0.005, 100));
    }
}
BENCHMARK(BM_PropagateStepExact)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SpectrumHarmonic(benchmark::State& state) {
    const auto c = harmonic(static_cast<int>(state.range(0)), 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_spectrum(c, 0));
    }
}
BENCHMARK(BM_SpectrumHarmonic)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_SpectrumStep(benchmark::State& state) {
    const auto c = step(static_cast<int>(state.range(0)), 6.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_spectrum(c, 0));
    }
}
BENCHMARK(BM_SpectrumStep)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_MarkovIntensity(benchmark::State& state) {
    const auto c = harmonic(200, 3.0);
    const auto noise = array_noise_spectrum(c);
    const auto& h = std::get<HarmonicCoupling>(c.modulation);
    double z = 0.0;
    for (auto _ : state) {
        z += 0.01;
        benchmark::DoNotOptimize(markov_intensity(noise, h, c.beta1_static, z));
    }
}
BENCHMARK(BM_MarkovIntensity);

}  // namespace

BENCHMARK_MAIN();
