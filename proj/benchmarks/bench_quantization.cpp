#include <benchmark/benchmark.h>

#include "gibbsk/quantization.hpp"
#include "gibbsk/rng.hpp"

using namespace gibbsk;

static void BM_GramMatrix(benchmark::State& state) {
  const ReferenceData ref = ReferenceData::standard(1, 64, 128);
  const Potential phi = random_potential(1, ref);
  const SectionBasis basis = section_basis(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(phi, Density::uniform(), basis, ref));
}
BENCHMARK(BM_GramMatrix)->Arg(2)->Arg(8)->Arg(16);

static std::vector<Vec3> points(int n) {
  const Philox4x32 gen(3);
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) {
    const auto u = gen.uniform2(static_cast<std::uint64_t>(i), 0);
    out.push_back(from_angles(std::acos(1 - 2 * u[0]), 2 * std::numbers::pi * u[1]));
  }
  return out;
}

static void BM_SlaterLU(benchmark::State& state) {
  const SectionBasis basis = section_basis(1, static_cast<int>(state.range(0)));
  const std::vector<Vec3> x = points(basis.dimension());
  for (auto _ : state) benchmark::DoNotOptimize(slater_log_det(x, Potential::zero(), basis));
}
BENCHMARK(BM_SlaterLU)->Arg(1)->Arg(4)->Arg(16);

static void BM_SlaterProduct(benchmark::State& state) {
  const SectionBasis basis = section_basis(1, static_cast<int>(state.range(0)));
  const std::vector<Vec3> x = points(basis.dimension());
  for (auto _ : state) benchmark::DoNotOptimize(slater_log_det_product(x, basis));
}
BENCHMARK(BM_SlaterProduct)->Arg(1)->Arg(4)->Arg(16);
