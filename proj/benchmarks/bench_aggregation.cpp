#include <benchmark/benchmark.h>

#include "sfol/aggregation.hpp"
#include "sfol/rng.hpp"

namespace {

void BM_ClippedSquareStep(benchmark::State& state) {
  using namespace sfol;
  const int experts = static_cast<int>(state.range(0));
  AggregatorState agg = make_clipped_square_aggregator(grid_log_prior(experts - 1));
  Rng rng(1);
  std::vector<Vector> actions(experts);
  for (auto& a : actions) a = Vector::Constant(1, rng.uniform(-1, 1));
  ScaleState sc;
  LabeledExample ex;
  ex.features = Vector::Zero(0);
  ex.response = RealResponse{Vector::Constant(1, 1.0)};
  sc = update_scale(sc, ex, 0);
  sc = update_scale(sc, ex, 0);

  for (auto _ : state) {
    auto step = clipped_square_aggregate_step(agg, actions, Vector::Constant(1, 0.7), sc);
    benchmark::DoNotOptimize(step.action);
  }
}

void BM_LogLossStep(benchmark::State& state) {
  using namespace sfol;
  const int experts = static_cast<int>(state.range(0));
  AggregatorState agg = make_logloss_aggregator(grid_log_prior(experts - 1));
  Rng rng(2);
  Matrix dists(experts, 2);
  for (int m = 0; m < experts; ++m) {
    const double p = rng.uniform(0.1, 0.9);
    dists(m, 0) = p;
    dists(m, 1) = 1 - p;
  }
  for (auto _ : state) {
    auto step = logloss_aggregate_step(agg, dists, 1);
    benchmark::DoNotOptimize(step.first);
  }
}

}  // namespace

BENCHMARK(BM_ClippedSquareStep)->Arg(8)->Arg(41)->Arg(65);
BENCHMARK(BM_LogLossStep)->Arg(8)->Arg(65);
