#include <benchmark/benchmark.h>

#include "toeplitz/corpus.hpp"
#include "toeplitz/toeplitz_builder.hpp"

namespace {

void BM_assemble_eta(benchmark::State& state) {
  const auto t = toeplitz::make_telescope({{2, 16, 128}, 512, 1});
  std::vector<std::int64_t> candidates;
  for (std::int64_t p = 1; p <= 128; ++p)
    if (!toeplitz::skeleton(t.rule, p, 2048).empty_domain())
      candidates.push_back(p);
  const auto sr = toeplitz::build_periodic_structure(t.rule, candidates, 2048);
  const auto chain = toeplitz::refine_growth(sr.structure);
  for (auto _ : state)
    benchmark::DoNotOptimize(toeplitz::assemble_eta(t.rule, chain, 4096));
}
BENCHMARK(BM_assemble_eta);

}  // namespace
