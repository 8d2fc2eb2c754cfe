#include <benchmark/benchmark.h>

#include "sfol/logistic.hpp"
#include "sfol/rng.hpp"

namespace {

void BM_BayesLogisticRound(benchmark::State& state) {
  using namespace sfol;
  const int points = static_cast<int>(state.range(0));
  BayesLogistic learner(LogisticDomain{1, 2, 1.0, points});
  Rng rng(5);
  for (auto _ : state) {
    const Vector x = Vector::Constant(1, rng.uniform(-1, 1));
    benchmark::DoNotOptimize(learner.predict(x));
    learner.observe(x, rng.bernoulli(0.5) ? 1 : 2);
  }
}

void BM_BernoulliComplexity(benchmark::State& state) {
  using namespace sfol;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bernoulli_stochastic_complexity(n, 0.2, 0.8));
  }
  state.SetComplexityN(n);
}

}  // namespace

BENCHMARK(BM_BayesLogisticRound)->Arg(41)->Arg(201);
BENCHMARK(BM_BernoulliComplexity)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
