#include <benchmark/benchmark.h>

#include "gibbsk/gibbs.hpp"

using namespace gibbsk;

static void BM_SampleLogTerms(benchmark::State& state) {
  const ReferenceData ref = ReferenceData::standard(1, 32, 64);
  const SectionBasis basis = section_basis(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sample_log_terms(basis, Density::uniform(), ref, 100000, 7));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SampleLogTerms)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_PartitionFromTerms(benchmark::State& state) {
  const ReferenceData ref = ReferenceData::standard(1, 32, 64);
  const LogTerms t = sample_log_terms(section_basis(1, 3), Density::uniform(), ref, 100000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_partition(t, 1.0));
}
BENCHMARK(BM_PartitionFromTerms)->Unit(benchmark::kMicrosecond);
