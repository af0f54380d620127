#include <benchmark/benchmark.h>

#include "toeplitz/corpus.hpp"
#include "toeplitz/period_analysis.hpp"

namespace {

void BM_skeleton_sweep(benchmark::State& state) {
  const auto rule = toeplitz::make_telescope({{2, 16, 128}, 512, 1}).rule;
  const std::int64_t cap = state.range(0);
  for (auto _ : state) {
    for (std::int64_t p = 1; p <= cap; ++p)
      benchmark::DoNotOptimize(toeplitz::skeleton(rule, p, 4096));
  }
}
BENCHMARK(BM_skeleton_sweep)->Arg(16)->Arg(64);

void BM_structure(benchmark::State& state) {
  const auto rule = toeplitz::make_telescope({{2, 16, 128}, 512, 1}).rule;
  std::vector<std::int64_t> candidates;
  for (std::int64_t p = 1; p <= 128; ++p)
    if (!toeplitz::skeleton(rule, p, 2048).empty_domain())
      candidates.push_back(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        toeplitz::build_periodic_structure(rule, candidates, 2048));
}
BENCHMARK(BM_structure);

void BM_aperiodic_positions(benchmark::State& state) {
  const auto rule = toeplitz::even_constant_odd_aperiodic_rule();
  for (auto _ : state)
    benchmark::DoNotOptimize(toeplitz::aperiodic_positions(rule, 16, 2048));
}
BENCHMARK(BM_aperiodic_positions);

}  // namespace
