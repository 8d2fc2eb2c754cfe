#include <doctest.h>

#include <cmath>

#include "sfol/normal_location.hpp"
#include "sfol/quadrature.hpp"

using namespace sfol;

TEST_CASE("minimax value matches the d=1 closed form") {
  const NormalLocationModel model{1.0, 1, 2};
  const double closed =
      0.5 * std::log(4.0 / M_PI) + std::log(1.0 + std::sqrt(M_PI) / 2.0);
  CHECK(minimax_regret_value(1.0, model) == doctest::Approx(closed).epsilon(1e-9));
  CHECK(minimax_regret_value(1.0, model) == doctest::Approx(0.7553607356).epsilon(1e-8));
  CHECK_THROWS_AS(minimax_regret_value(-1.0, model), std::invalid_argument);
}

TEST_CASE("lower-order term decays with the horizon") {
  CHECK(normal_location_v_term(1.0, {1.0, 1, 100000000}) < 1.3e-4);
  CHECK(normal_location_v_term(1.0, {1.0, 1, 4}) >
        normal_location_v_term(1.0, {1.0, 1, 64}));
}

TEST_CASE("radius and horizon monotonicity") {
  const NormalLocationModel base{1.0, 2, 8};
  CHECK(minimax_regret_value(2.0, base) > minimax_regret_value(1.0, base));
  CHECK(minimax_regret_value(1.0, {1.0, 2, 32}) > minimax_regret_value(1.0, base));

  // doubling U shifts the leading term by exactly ln 2 per axis pair
  const double lo = minimax_regret_value(1.0, {1.0, 1, 2});
  const double hi = minimax_regret_value(2.0, {1.0, 1, 2});
  const double v_lo = normal_location_v_term(1.0, {1.0, 1, 2});
  const double v_hi = normal_location_v_term(2.0, {1.0, 1, 2});
  CHECK(hi - lo == doctest::Approx(std::log(2.0) + v_hi - v_lo).epsilon(1e-10));
}

TEST_CASE("oracle route agrees across dimensions") {
  for (int d : {1, 2, 3}) {
    const NormalLocationModel model{0.5, d, 8};
    CHECK(minimax_regret_value(1.5, model) ==
          doctest::Approx(nml_normalizer_oracle(1.5, model)).epsilon(1e-7));
  }
  CHECK_THROWS_AS(nml_normalizer_oracle(1.0, {1.0, 4, 8}), std::invalid_argument);
}

TEST_CASE("conditional density at the first round matches the direct form") {
  const NormalLocationModel model{1.0, 1, 1};
  const auto density = nml_conditional_predict_1d({}, 1.0, model);
  const double lnZ = nml_normalizer_oracle(1.0, model);
  const double norm = std::exp(lnZ) * std::sqrt(2.0 * M_PI);
  for (double y : {0.0, 0.5, 1.0, 2.5, -1.7}) {
    const double dist = std::max(std::abs(y) - 1.0, 0.0);
    const double expected = std::exp(-0.5 * dist * dist) / norm;
    CHECK(density(y) == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("conditional density is symmetric and normalized") {
  const NormalLocationModel model{1.0, 1, 3};
  const auto fresh = nml_conditional_predict_1d({}, 0.8, model);
  for (double y : {0.3, 1.1, 2.0}) {
    CHECK(fresh(y) == doctest::Approx(fresh(-y)).epsilon(1e-9));
  }

  const auto seen = nml_conditional_predict_1d({0.5}, 0.8, model);
  const double span = 50.0 * std::sqrt(3.0);
  const double total =
      adaptive_integrate([&](double y) { return seen(y); }, -span, span, 1e-8);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(nml_conditional_predict_1d({}, 1.0, {1.0, 2, 3}), std::invalid_argument);
}

TEST_CASE("adaptive predictor pays at most the prior overhead per expert") {
  const NormalLocationModel model{1.0, 1, 8};
  AdaptiveNormalPredictor learner(model, 12);
  CHECK(learner.num_experts() == 13);
  const double ys[] = {0.4, -0.2, 0.9, 0.1, -0.5, 0.3, 0.6, -0.1};
  for (double y : ys) learner.observe(y);
  const AggregatorState& agg = learner.aggregator();
  for (int m = 0; m < learner.num_experts(); ++m) {
    CHECK(learner.cumulative_loss() <= agg.cum_loss[m] - agg.log_prior[m] + 1e-9);
  }
  // telescoped identity of the mixture loss
  double lse = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < learner.num_experts(); ++m) {
    lse = log_add_exp(lse, agg.log_prior[m] - agg.cum_loss[m]);
  }
  CHECK(learner.cumulative_loss() == doctest::Approx(-lse).epsilon(1e-9));
}

TEST_CASE("predictive density agrees with the realized mixture mass") {
  AdaptiveNormalPredictor learner({1.0, 1, 6}, 10);
  for (double y : {0.4, -0.9, 0.2}) {
    const double density = learner.predict_density(y);
    const double loss = learner.observe(y);
    CHECK(density == doctest::Approx(std::exp(-loss)).epsilon(1e-10));
  }
}

TEST_CASE("zero stream stays within the adaptive bound at the smallest radius") {
  const NormalLocationModel model{1.0, 1, 8};
  AdaptiveNormalPredictor learner(model, 16);
  double learner_loss = 0.0, comparator_loss = 0.0;
  for (int t = 0; t < model.T; ++t) {
    learner_loss += learner.observe(0.0);
    comparator_loss += 0.5 * std::log(2.0 * M_PI);  // N(0,1) density at 0
  }
  const double bound = adaptive_normal_bound(0.0, model);
  CHECK(learner_loss - comparator_loss <= bound + 1e-9);
}
