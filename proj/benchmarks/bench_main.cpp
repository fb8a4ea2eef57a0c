#include <benchmark/benchmark.h>

#include "polsim/elements.hpp"
#include "polsim/examples.hpp"
#include "polsim/fock.hpp"
#include "polsim/imperfect.hpp"
#include "polsim/measurement.hpp"
#include "polsim/stokes.hpp"

namespace {

void BM_StokesLinearized(benchmark::State& state) {
    const auto s = polsim::build_example(3, 0.5, 2.0, 100.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(polsim::stokes_linearized(s));
}
BENCHMARK(BM_StokesLinearized);

void BM_ApplyElement(benchmark::State& state) {
    const auto s = polsim::build_example(3, 0.5, 2.0, 100.0);
    const polsim::OpticalElement hwp = polsim::HalfWavePlate{0.3};
    for (auto _ : state)
        benchmark::DoNotOptimize(polsim::apply_element(s, hwp));
}
BENCHMARK(BM_ApplyElement);

void BM_MeasureChain(benchmark::State& state) {
    const auto s = polsim::build_example(3, 0.5, 2.0, 100.0);
    const auto cfg =
        polsim::MeasurementConfig::ideal(polsim::StokesIndex::S3);
    for (auto _ : state) benchmark::DoNotOptimize(polsim::measure(s, cfg));
}
BENCHMARK(BM_MeasureChain);

void BM_StokesExact(benchmark::State& state) {
    const double alpha = static_cast<double>(state.range(0));
    const int cutoff = polsim::fock::auto_cutoff(alpha);
    const auto psi_x =
        polsim::fock::coherent_squeezed_state(alpha, 0.3466, 0.0, cutoff);
    const auto psi_y = polsim::fock::coherent_squeezed_state(0.0, 0.0, 0.0, cutoff);
    const auto fs = polsim::fock::product_state(psi_x, psi_y);
    for (auto _ : state)
        benchmark::DoNotOptimize(polsim::fock::stokes_exact(fs));
}
BENCHMARK(BM_StokesExact)->Arg(2)->Arg(4)->Arg(8);

void BM_MonteCarlo(benchmark::State& state) {
    const auto s = polsim::build_example(3, 0.5, 2.0, 100.0);
    const auto cfg =
        polsim::MeasurementConfig::ideal(polsim::StokesIndex::S2);
    const auto det = polsim::DetectorPairModel::ideal();
    auto env = polsim::EnvironmentModel::ideal();
    env.phase_jitter_std = 0.004;
    const polsim::MonteCarlo mc{state.range(0), 42};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            polsim::measure_imperfect(s, cfg, det, env, mc));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
