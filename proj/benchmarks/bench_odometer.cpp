#include <benchmark/benchmark.h>

#include "toeplitz/odometer.hpp"

namespace {

void BM_step_walk(benchmark::State& state) {
  const toeplitz::OdometerSpace space({2, 8, 32, 128});
  auto e = toeplitz::from_integer(space, 0);
  for (auto _ : state) {
    e = toeplitz::step(e);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_step_walk);

void BM_natural_distance(benchmark::State& state) {
  const toeplitz::OdometerSpace space({2, 8, 32, 128, 256});
  const auto a = toeplitz::from_integer(space, 37);
  const auto b = toeplitz::from_integer(space, 165);
  for (auto _ : state)
    benchmark::DoNotOptimize(toeplitz::natural_distance(a, b));
}
BENCHMARK(BM_natural_distance);

void BM_verify_partition(benchmark::State& state) {
  const toeplitz::OdometerSpace space({2, 16, 256});
  for (auto _ : state)
    benchmark::DoNotOptimize(toeplitz::verify_partition(space, 2));
}
BENCHMARK(BM_verify_partition);

}  // namespace
