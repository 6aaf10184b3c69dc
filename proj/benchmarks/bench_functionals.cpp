#include <benchmark/benchmark.h>

#include "gibbsk/functionals.hpp"

using namespace gibbsk;

static void BM_BuildQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PolarizedModel model(1);
  for (auto _ : state) benchmark::DoNotOptimize(build_quadrature(n, 2 * n, model));
}
BENCHMARK(BM_BuildQuadrature)->Arg(16)->Arg(64)->Arg(128);

static void BM_Energy(benchmark::State& state) {
  const ReferenceData ref = ReferenceData::standard(1, 64, 128);
  const Potential phi = random_potential(1, ref);
  for (auto _ : state) benchmark::DoNotOptimize(energy(phi, ref));
}
BENCHMARK(BM_Energy);

static void BM_Entropy(benchmark::State& state) {
  const ReferenceData ref = ReferenceData::standard(1, 64, 128);
  const Potential phi = random_potential(1, ref);
  for (auto _ : state) benchmark::DoNotOptimize(entropy(phi, Density::uniform(), ref));
}
BENCHMARK(BM_Entropy);

static void BM_MabuchiDingMargin(benchmark::State& state) {
  const ReferenceData ref = ReferenceData::standard(1, 64, 128);
  const Potential phi = random_potential(1, ref);
  for (auto _ : state)
    benchmark::DoNotOptimize(mabuchi_ding_margin(phi, 0.5, Density::uniform(), OneOneForm::zero(), ref));
}
BENCHMARK(BM_MabuchiDingMargin);
