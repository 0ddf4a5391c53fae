#include "ivmech/gen.hpp"
#include "ivmech/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace ivmech;

namespace {

struct Case {
  Ratios rho;
  LineOrdering ord;
};

Case make_case(int n, int k) {
  auto inst = gen_random(n, k, Mode::Good, 17);
  return {ratios_from_values(inst), orderings_from_instance(inst)};
}

BruteForceOptions open_cap() {
  BruteForceOptions opt;
  opt.allow_backtracking = true;
  return opt;
}

void BM_Serial(benchmark::State& state) {
  auto c = make_case(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::size_t nodes = 0;
  for (auto _ : state) nodes = brute_force_det_serial(c.rho, c.ord, open_cap()).nodes;
  state.counters["nodes"] = static_cast<double>(nodes);
}

void BM_Parallel(benchmark::State& state) {
  auto c = make_case(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::size_t nodes = 0;
  for (auto _ : state) nodes = brute_force_det(c.rho, c.ord, open_cap()).nodes;
  state.counters["nodes"] = static_cast<double>(nodes);
}

}  // namespace

BENCHMARK(BM_Serial)->Args({2, 3})->Args({2, 4})->Args({3, 2})->Args({2, 5})->Args({2, 7})->Args({3, 3})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->Args({2, 3})->Args({2, 4})->Args({3, 2})->Args({2, 5})->Args({2, 7})->Args({3, 3})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
