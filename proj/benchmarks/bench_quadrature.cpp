#include <benchmark/benchmark.h>

#include "sfol/normal_location.hpp"

namespace {

void BM_MinimaxValue(benchmark::State& state) {
  using namespace sfol;
  const NormalLocationModel model{1.0, static_cast<int>(state.range(0)), 32};
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimax_regret_value(1.0, model));
  }
}

void BM_NmlOracle(benchmark::State& state) {
  using namespace sfol;
  const NormalLocationModel model{1.0, static_cast<int>(state.range(0)), 32};
  for (auto _ : state) {
    benchmark::DoNotOptimize(nml_normalizer_oracle(1.0, model));
  }
}

}  // namespace

BENCHMARK(BM_MinimaxValue)->Arg(1)->Arg(3);
BENCHMARK(BM_NmlOracle)->Arg(1)->Arg(3);
