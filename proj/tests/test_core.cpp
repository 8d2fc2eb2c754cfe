#include <doctest.h>

#include <cmath>

#include "sfol/comparators.hpp"
#include "sfol/losses.hpp"
#include "sfol/rng.hpp"
#include "sfol/types.hpp"

using namespace sfol;

namespace {

LabeledExample real_ex(std::initializer_list<double> x, double y) {
  LabeledExample ex;
  ex.features = Vector(x.size());
  int i = 0;
  for (double v : x) ex.features[i++] = v;
  ex.response = RealResponse{Vector::Constant(1, y)};
  return ex;
}

LabeledExample class_ex(std::initializer_list<double> x, int y) {
  LabeledExample ex;
  ex.features = Vector(x.size());
  int i = 0;
  for (double v : x) ex.features[i++] = v;
  ex.response = ClassResponse{y};
  return ex;
}

}  // namespace

TEST_CASE("update_scale tracks maxima and the first nonzero round") {
  ScaleState s;
  s = update_scale(s, real_ex({0.0, 0.0}, 0.0), 2);
  CHECK(s.x_max == 0.0);
  CHECK(!s.first_nonzero_x.has_value());

  ScaleState s2;
  s2.x_max = 1.0;
  s2.y_max = 2.0;
  s2 = update_scale(s2, real_ex({0.0, 3.0}, 1.5), 2);
  CHECK(s2.x_max == 3.0);
  CHECK(s2.y_max_prev == 2.0);
  CHECK(s2.y_max == 2.0);

  ScaleState s3;
  s3.round = 4;
  s3 = update_scale(s3, real_ex({0.1}, 0.0), 1);
  CHECK(s3.first_nonzero_x == 5);
}

TEST_CASE("update_scale replay leaves the maxima unchanged") {
  Rng rng(11);
  ScaleState s;
  for (int t = 0; t < 50; ++t) {
    auto ex = real_ex({rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(-3, 3));
    s = update_scale(s, ex, 2);
    const ScaleState replayed = update_scale(s, ex, 2);
    CHECK(replayed.x_max == s.x_max);
    CHECK(replayed.y_max == s.y_max);
    CHECK(replayed.first_nonzero_x == s.first_nonzero_x);
  }
}

TEST_CASE("update_scale rejects dimension mismatches") {
  ScaleState s;
  CHECK_THROWS_AS(update_scale(s, real_ex({1.0, 2.0}, 0.0), 3), std::invalid_argument);
}

TEST_CASE("eval_loss on the worked examples") {
  Vector a(2);
  a << 1, 0;
  Vector y(2);
  y << 0, 0;
  CHECK(eval_loss(LossKind::Square, a, RealResponse{y}) == doctest::Approx(0.5));

  Vector p(2);
  p << 0.25, 0.75;
  CHECK(eval_loss(LossKind::Log, p, ClassResponse{2}) == doctest::Approx(std::log(4.0 / 3.0)));

  Vector q(2);
  q << 1.0, 0.0;
  CHECK(eval_loss(LossKind::Log, q, ClassResponse{2}) == kInfiniteLossSentinel);

  // logistic is log loss on a mass tuple
  CHECK(eval_loss(LossKind::Logistic, p, ClassResponse{1}) ==
        doctest::Approx(-std::log(0.25)));
}

TEST_CASE("eval_loss rejects bad mass tuples") {
  Vector p(2);
  p << -0.1, 1.1;
  CHECK_THROWS_AS(eval_loss(LossKind::Log, p, ClassResponse{1}), std::invalid_argument);
  Vector r(2);
  r << 0.4, 0.4;
  CHECK_THROWS_AS(eval_loss(LossKind::Logistic, r, ClassResponse{1}), std::invalid_argument);
  Vector a(2);
  a << 1, 2;
  Vector y(3);
  y << 0, 0, 0;
  CHECK_THROWS_AS(eval_loss(LossKind::Square, a, RealResponse{y}), std::invalid_argument);
}

TEST_CASE("square loss is rotation invariant") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Vector a(2), y(2);
    a << rng.normal(), rng.normal();
    y << rng.normal(), rng.normal();
    const double phi = rng.uniform(0, 2 * M_PI);
    Matrix rot(2, 2);
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    const double base = eval_loss(LossKind::Square, a, RealResponse{y});
    const double rotated =
        eval_loss(LossKind::Square, Vector(rot * a), RealResponse{Vector(rot * y)});
    CHECK(rotated == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("regret ledger recomputation matches the incremental value") {
  Rng rng(7);
  RegretLedger ledger;
  for (int t = 0; t < 3000; ++t) {
    ledger.record(rng.uniform(0, 5), rng.uniform(0, 5));
  }
  CHECK(std::abs(ledger.cum_regret() - ledger.recompute()) <= 1e-9);
}

TEST_CASE("best_square_comparator worked examples") {
  std::vector<LabeledExample> one{real_ex({1.0}, 2.0)};
  CHECK(best_square_comparator(one, 5.0).theta(0, 0) == doctest::Approx(2.0));
  CHECK(best_square_comparator(one, 1.0).theta(0, 0) == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<LabeledExample> two{real_ex({1.0}, 1.0), real_ex({2.0}, 1.0)};
  CHECK(best_square_comparator(two, 10.0).theta(0, 0) == doctest::Approx(0.6));

  CHECK_THROWS_AS(best_square_comparator({}, 1.0), std::invalid_argument);
}

TEST_CASE("unconstrained least squares beats random feasible points") {
  Rng rng(13);
  std::vector<LabeledExample> data;
  for (int t = 0; t < 40; ++t) {
    data.push_back(real_ex({rng.normal(), rng.normal(), rng.normal()},
                           rng.normal() + rng.uniform(-1, 1)));
  }
  const Comparator best =
      best_square_comparator(data, std::numeric_limits<double>::infinity());
  const auto objective = [&](const Vector& theta) {
    double o = 0.0;
    for (const auto& ex : data) o += square_loss(theta.dot(ex.features), ex.real_value()[0]);
    return o;
  };
  const double best_obj = objective(best.as_vector());
  for (int trial = 0; trial < 1000; ++trial) {
    Vector theta(3);
    theta << rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3);
    CHECK(best_obj <= objective(theta) + 1e-9);
  }
}

TEST_CASE("logistic comparator saturates on single-class data") {
  std::vector<LabeledExample> data(6, class_ex({1.0}, 1));
  const Comparator c = best_logistic_comparator(data, 1.0, 2);
  CHECK(c.norm_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c.theta(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c.theta(1, 0) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("logistic comparator vanishes on balanced symmetric data") {
  std::vector<LabeledExample> data;
  for (int i = 0; i < 4; ++i) {
    data.push_back(class_ex({1.0}, 1));
    data.push_back(class_ex({1.0}, 2));
  }
  const Comparator c = best_logistic_comparator(data, 1.0, 2);
  CHECK(c.norm_value <= 1e-6);
}

TEST_CASE("logistic comparator matches the 1-d grid-search oracle") {
  std::vector<LabeledExample> data{class_ex({1.0}, 1), class_ex({1.0}, 1), class_ex({1.0}, 2)};
  // symmetric rows (+m, -m): objective 2 ln(1+e^{-2m}) + ln(1+e^{2m})
  double best_m = 0.0, best_f = std::numeric_limits<double>::infinity();
  for (double m = 0.0; m <= 1.0; m += 1e-5) {
    const double f = 2.0 * std::log1p(std::exp(-2.0 * m)) + std::log1p(std::exp(2.0 * m));
    if (f < best_f) {
      best_f = f;
      best_m = m;
    }
  }
  CHECK(best_m == doctest::Approx(0.34657).epsilon(1e-3));

  const Comparator c = best_logistic_comparator(data, 1.0, 2);
  CHECK(c.norm_value == doctest::Approx(best_m).epsilon(1e-3));
  CHECK(logistic_objective(c.theta, data) <= best_f + 1e-6);
}

TEST_CASE("comparator norms") {
  Matrix theta(2, 2);
  theta << 3, 4, 0, 1;
  CHECK(comparator_norm(theta, NormKind::RowMaxOfL2) == doctest::Approx(5.0));
  CHECK(comparator_norm(theta, NormKind::L2) == doctest::Approx(std::sqrt(26.0)));
  CHECK(comparator_norm(theta, NormKind::TwoToInfty) == doctest::Approx(5.0));
}
