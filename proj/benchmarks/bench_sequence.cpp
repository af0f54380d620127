#include <benchmark/benchmark.h>

#include "toeplitz/corpus.hpp"
#include "toeplitz/sequence.hpp"

namespace {

void BM_fill_eval(benchmark::State& state) {
  const auto rule = toeplitz::make_telescope({{2, 16, 128}, 1024, 1}).rule;
  std::int64_t n = -100000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rule.eval(n));
    n += 7;
  }
}
BENCHMARK(BM_fill_eval);

void BM_substitution_eval_cold(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    const auto tm = toeplitz::thue_morse_rule();
    state.ResumeTiming();
    benchmark::DoNotOptimize(tm.eval(state.range(0)));
  }
}
BENCHMARK(BM_substitution_eval_cold)->Arg(1 << 10)->Arg(1 << 14);

void BM_materialize_window(benchmark::State& state) {
  const auto rule = toeplitz::even_constant_odd_aperiodic_rule();
  const std::int64_t radius = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(toeplitz::materialize(rule, -radius, radius));
}
BENCHMARK(BM_materialize_window)->Arg(1 << 10)->Arg(1 << 12);

void BM_product_distance(benchmark::State& state) {
  const auto a = toeplitz::thue_morse_rule();
  const auto b = toeplitz::SequenceRule::shift_of(a, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(toeplitz::product_distance(a, b, state.range(0)));
}
BENCHMARK(BM_product_distance)->Arg(64)->Arg(1024);

}  // namespace
