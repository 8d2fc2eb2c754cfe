#include <doctest.h>

#include <cmath>

#include "sfol/adversaries.hpp"
#include "sfol/losses.hpp"
#include "sfol/rng.hpp"

using namespace sfol;

TEST_CASE("beta-bernoulli stream: concentration formula, support, determinism") {
  // block horizon 8 and per-coordinate radius 1/2
  const AdversaryStream s = beta_bernoulli_stream(8, 1, 0.5, 1.0, 0.5, 42);
  CHECK(s.A == doctest::Approx(16.0 * std::log(2.0)));
  for (const auto& ex : s.rounds) {
    CHECK(std::abs(ex.real_value()[0]) == doctest::Approx(0.5));
  }

  const AdversaryStream again = beta_bernoulli_stream(8, 1, 0.5, 1.0, 0.5, 42);
  CHECK(again.p[0] == s.p[0]);
  for (int t = 0; t < 8; ++t) {
    CHECK(again.rounds[t].real_value()[0] == s.rounds[t].real_value()[0]);
  }

  const AdversaryStream other = beta_bernoulli_stream(8, 1, 0.5, 1.0, 0.5, 43);
  CHECK(other.p[0] != s.p[0]);

  CHECK_THROWS_AS(beta_bernoulli_stream(8, 1, 5.0, 1.0, 0.5, 1), std::invalid_argument);
}

TEST_CASE("beta-bernoulli features cycle the scaled basis") {
  const AdversaryStream s = beta_bernoulli_stream(6, 3, 0.5, 2.0, 1.0, 7);
  for (int t = 0; t < 6; ++t) {
    const Vector& x = s.rounds[t].features;
    CHECK(x.norm() == doctest::Approx(2.0));
    CHECK(x[t % 3] == doctest::Approx(2.0));
  }
}

TEST_CASE("bayes optimal action worked examples") {
  CHECK(bayes_optimal_action({}, 3.0) == doctest::Approx(0.5));
  CHECK(bayes_optimal_action({1, 1}, 1.0) == doctest::Approx(0.75));
  CHECK(bayes_optimal_action({1, 1, 1}, 1e12) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(bayes_optimal_action({1}, 0.0), std::invalid_argument);
}

TEST_CASE("rademacher stream sanity") {
  const int T = 100000;
  const AdversaryStream s = rademacher_stream(T, 2, 1.0, 1.5, 11);
  double sum = 0.0;
  for (const auto& ex : s.rounds) {
    CHECK(std::abs(ex.real_value()[0]) == doctest::Approx(1.5));
    sum += ex.real_value()[0];
  }
  CHECK(std::abs(sum / T) <= 3.0 * 1.5 / std::sqrt(static_cast<double>(T)));
}

TEST_CASE("rademacher absolute sums meet the root-T moment floor") {
  const int T = 64;
  const int trials = 10000;
  double mean_abs = 0.0;
  std::vector<double> vals;
  for (int trial = 0; trial < trials; ++trial) {
    const AdversaryStream s = rademacher_stream(T, 1, 1.0, 1.0, 2000 + trial);
    double sum = 0.0;
    for (const auto& ex : s.rounds) sum += ex.real_value()[0];
    vals.push_back(std::abs(sum));
    mean_abs += std::abs(sum);
  }
  mean_abs /= trials;
  double var = 0.0;
  for (double v : vals) var += (v - mean_abs) * (v - mean_abs);
  const double se = std::sqrt(var / (trials - 1) / trials);
  CHECK(mean_abs >= std::sqrt(T / 2.0) - 3.0 * se);
}

namespace {

class ZeroLearner : public ScalarLearner {
 public:
  double predict(const Vector&) override { return 0.0; }
  void observe(const Vector&, double) override {}
};

class NoisyLearner : public ScalarLearner {
 public:
  double predict(const Vector&) override { return rng_.uniform(-2, 2); }
  void observe(const Vector&, double) override {}

 private:
  Rng rng_{99};
};

}  // namespace

TEST_CASE("sign flip forces the floor for arbitrary learners") {
  const double floor4 = lower_bound_value(LowerBoundKind::Prop21, {4, 4, 1, 1, 1}).value;
  CHECK(floor4 == doctest::Approx(1.0));

  ZeroLearner zero;
  const SignFlipResult rz = sign_flip_run(zero, 4, 4, 1.0, 1.0, 1.0);
  CHECK(rz.regret >= floor4);
  CHECK(rz.comparator.norm_value == doctest::Approx(1.0).epsilon(1e-12));

  // a_t = 0 attains the displayed per-round gap
  const double gap = (2.0 * 1.0 / std::sqrt(4.0) - 1.0 / 4.0) / 2.0;
  for (const auto& [l, c] : rz.ledger.per_round()) {
    CHECK(l - c == doctest::Approx(gap));
  }

  NoisyLearner noisy;
  CHECK(sign_flip_run(noisy, 4, 4, 1.0, 1.0, 1.0).regret >= floor4);

  CHECK_THROWS_AS(sign_flip_run(zero, 5, 4, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("lower bound displays and regime flags") {
  const auto p21 = lower_bound_value(LowerBoundKind::Prop21, {16, 16, 1, 1, 1});
  CHECK(p21.value == doctest::Approx(2.0));
  CHECK(p21.in_regime);

  const auto p20 = lower_bound_value(LowerBoundKind::Prop20, {16, 16, 1, 1, 1});
  CHECK(p20.value == doctest::Approx(std::sqrt(2.0) / 2.0));

  // d <= T <= (d/8)(Y/UX)^2 needs Y/(UX) > sqrt(8)
  const auto p20_in = lower_bound_value(LowerBoundKind::Prop20, {32, 32, 0.25, 1, 1});
  CHECK(p20_in.in_regime);

  const auto p20_bad = lower_bound_value(LowerBoundKind::Prop20, {16, 4, 1, 1, 1});
  CHECK(!p20_bad.in_regime);

  const auto p21_bad = lower_bound_value(LowerBoundKind::Prop21, {32, 16, 1, 1, 1});
  CHECK(!p21_bad.in_regime);
  CHECK(p21_bad.value == doctest::Approx(0.5 * std::sqrt(32.0)));

  const auto p19 = lower_bound_value(LowerBoundKind::Prop19Finite, {10000, 1, 0.5, 1, 0.5});
  CHECK(std::isfinite(p19.value));
  CHECK(p19.in_regime);

  const auto p19t = lower_bound_value(LowerBoundKind::Prop19TDep, {10000, 1, 0.5, 1, 0.5});
  CHECK(p19t.value ==
        doctest::Approx(0.09 * std::log(10000 * 0.25 / (2.0 * std::log(20000.0)) + 1.0) -
                        1.0));

  const auto asym = lower_bound_value(LowerBoundKind::Thm14Asym, {1000, 2, 1, 1, 1});
  CHECK(asym.value == doctest::Approx(std::log(1000.0 / 4.0)));
}

TEST_CASE("generated streams respect their declared caps") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const AdversaryStream bb = beta_bernoulli_stream(50, 3, 0.5, 1.3, 0.9, seed);
    for (const auto& ex : bb.rounds) {
      CHECK(ex.features.norm() <= 1.3 + 1e-15);
      CHECK(std::abs(ex.real_value()[0]) <= 0.9 + 1e-15);
    }
    const AdversaryStream rad = rademacher_stream(50, 2, 0.7, 2.0, seed);
    for (const auto& ex : rad.rounds) {
      CHECK(ex.features.norm() <= 0.7 + 1e-15);
      CHECK(std::abs(ex.real_value()[0]) <= 2.0 + 1e-15);
    }
  }
}
