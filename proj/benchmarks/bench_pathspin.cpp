#include <benchmark/benchmark.h>

#include "pathspin/chsh.hpp"
#include "pathspin/experiment.hpp"
#include "pathspin/lhv.hpp"
#include "pathspin/preparation.hpp"

namespace {

using namespace pathspin;

SettingsAngles optimal_angles() {
  return {std::numbers::pi / 2.0, std::numbers::pi / 4.0,
          5.0 * std::numbers::pi / 4.0, 3.0 * std::numbers::pi / 4.0};
}

void BM_joint_distribution(benchmark::State& state) {
  const Vec4 psi = maximally_entangled().vec;
  const PathObservable a(std::numbers::pi / 4.0);
  const SpinObservable b = SpinObservable::from_polar(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_distribution(psi, a, b));
  }
}
BENCHMARK(BM_joint_distribution);

void BM_chsh_value(benchmark::State& state) {
  const Vec4 psi = maximally_entangled().vec;
  const ChshSettings settings = optimal_angles().build();
  for (auto _ : state) {
    benchmark::DoNotOptimize(chsh_value(psi, settings));
  }
}
BENCHMARK(BM_chsh_value);

void BM_optimize_settings(benchmark::State& state) {
  const Vec4 psi = maximally_entangled().vec;
  OptimizerOptions opts;
  opts.grid_resolution = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_settings(psi, opts));
  }
}
BENCHMARK(BM_optimize_settings)->Arg(32)->Arg(64)->Arg(128);

void BM_simulate_counts(benchmark::State& state) {
  const Vec4 psi = maximally_entangled().vec;
  const ChshSettings settings = optimal_angles().build();
  const DetectorModel det{0.999, 0.001};
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_counts(psi, settings.a1, settings.b1, shots, det, seed++));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_simulate_counts)->Arg(10000)->Arg(100000);

void BM_sample_assignment(benchmark::State& state) {
  const LhvModel model = LhvModel::uniform();
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_assignment(model, rng));
  }
}
BENCHMARK(BM_sample_assignment);

}  // namespace

BENCHMARK_MAIN();
