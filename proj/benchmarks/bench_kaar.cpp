#include <benchmark/benchmark.h>

#include "sfol/regression.hpp"
#include "sfol/rng.hpp"

namespace {

void BM_KaarPredictDual(benchmark::State& state) {
  using namespace sfol;
  const int history = static_cast<int>(state.range(0));
  Rng rng(3);
  KaarState s;
  s.kernel = Kernel::gaussian_rbf(0.8);
  s.lambda = 1.0;
  for (int t = 0; t < history; ++t) {
    Vector x(2);
    x << rng.uniform(-1, 1), rng.uniform(-1, 1);
    s = kaar_observe(std::move(s), x, rng.uniform(-1, 1));
  }
  Vector q(2);
  q << 0.3, -0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kaar_predict(s, q));
  }
  state.SetComplexityN(history);
}

void BM_AkaarLinearRound(benchmark::State& state) {
  using namespace sfol;
  const int d = static_cast<int>(state.range(0));
  Rng rng(4);
  for (auto _ : state) {
    state.PauseTiming();
    Akaar learner(Kernel::linear(), 40);
    state.ResumeTiming();
    for (int t = 0; t < 50; ++t) {
      Vector x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1, 1);
      benchmark::DoNotOptimize(learner.predict(x));
      learner.observe(x, rng.uniform(-1, 1));
    }
  }
}

}  // namespace

BENCHMARK(BM_KaarPredictDual)->RangeMultiplier(2)->Range(16, 256)->Complexity();
BENCHMARK(BM_AkaarLinearRound)->Arg(1)->Arg(3);
