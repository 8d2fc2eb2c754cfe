#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sfol/comparators.hpp"
#include "sfol/losses.hpp"
#include "sfol/regression.hpp"
#include "sfol/rng.hpp"

using namespace sfol;

namespace {

std::vector<Vector> random_points(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> xs;
  for (int i = 0; i < n; ++i) {
    Vector x(d);
    for (int j = 0; j < d; ++j) x[j] = rng.uniform(-1, 1);
    xs.push_back(x);
  }
  return xs;
}

}  // namespace

TEST_CASE("kernels are symmetric and PSD on samples") {
  const auto xs = random_points(30, 2, 71);
  for (const Kernel& k : {Kernel::linear(), Kernel::gaussian_rbf(0.7),
                          Kernel::matern_sobolev(2.0, 2), Kernel::linear().scaled(3.0)}) {
    const Matrix g = k.gram(xs);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * std::max(g.trace(), 1.0));
  }
  CHECK_THROWS_AS(Kernel::matern_sobolev(0.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::gaussian_rbf(0.0), std::invalid_argument);
}

TEST_CASE("matern order 1/2 reduces to the exponential kernel") {
  const Kernel k = Kernel::matern_sobolev(1.0, 1);  // nu = 1/2, so exp(-r)
  Vector a = Vector::Constant(1, 0.0);
  for (double r : {0.1, 0.5, 2.0}) {
    const Vector b = Vector::Constant(1, r);
    CHECK(k(a, b) == doctest::Approx(std::exp(-r)).epsilon(1e-10));
  }
  CHECK(k(a, a) == 1.0);
}

TEST_CASE("kaar closed form on the worked example") {
  KaarState s;
  s.lambda = 1.0;
  CHECK(kaar_predict(s, Vector::Constant(1, 1.0)) == 0.0);

  s = kaar_observe(std::move(s), Vector::Constant(1, 1.0), 1.0);
  CHECK(kaar_predict(s, Vector::Constant(1, 1.0)) == doctest::Approx(1.0 / 3.0));
  CHECK(s.first_nonzero_k == 1);

  KaarState bad;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(kaar_predict(bad, Vector::Zero(1)), std::invalid_argument);
}

TEST_CASE("kaar is linear in the response history") {
  Rng rng(73);
  const auto xs = random_points(12, 2, 74);
  for (int trial = 0; trial < 20; ++trial) {
    KaarState a, b, sum;
    a.lambda = b.lambda = sum.lambda = 0.5;
    for (const auto& x : xs) {
      const double ya = rng.uniform(-1, 1);
      const double yb = rng.uniform(-1, 1);
      a = kaar_observe(std::move(a), x, ya);
      b = kaar_observe(std::move(b), x, yb);
      sum = kaar_observe(std::move(sum), x, ya + yb);
    }
    Vector q(2);
    q << rng.uniform(-1, 1), rng.uniform(-1, 1);
    CHECK(kaar_predict(a, q) + kaar_predict(b, q) ==
          doctest::Approx(kaar_predict(sum, q)).epsilon(1e-9));
  }
}

TEST_CASE("scale-free kaar: zero features, kernel scaling, worked value") {
  KaarState zero;
  for (int t = 0; t < 5; ++t) {
    CHECK(kaar_sf_predict(zero, Vector::Zero(2), 1.0) == 0.0);
    zero = kaar_observe(std::move(zero), Vector::Zero(2), 1.0);
  }
  CHECK(!zero.first_nonzero_k.has_value());

  KaarState s;
  s = kaar_observe(std::move(s), Vector::Constant(1, 1.0), 1.0);
  CHECK(kaar_sf_predict(s, Vector::Constant(1, 1.0), 1.0) == doctest::Approx(1.0 / 3.0));

  KaarState scaled = s;
  scaled.kernel = Kernel::linear().scaled(100.0);
  const double base = kaar_sf_predict(s, Vector::Constant(1, 0.4), 2.0);
  const double changed = kaar_sf_predict(scaled, Vector::Constant(1, 0.4), 2.0);
  CHECK(std::abs(changed - base) <= 1e-10 * std::max(std::abs(base), 1e-12));
}

namespace {

struct AkaarRun {
  std::vector<double> actions;
  std::vector<LabeledExample> data;
  double Y = 0.0;
};

AkaarRun drive_akaar(Akaar& learner, int T, int d, std::uint64_t seed, double y_scale,
                     double x_scale = 1.0) {
  Rng rng(seed);
  AkaarRun run;
  for (int t = 0; t < T; ++t) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1, 1) * x_scale;
    const double y = rng.uniform(-1, 1) * y_scale;
    run.actions.push_back(learner.predict(x));
    learner.observe(x, y);
    LabeledExample ex;
    ex.features = x;
    ex.response = RealResponse{Vector::Constant(1, y)};
    run.data.push_back(std::move(ex));
    run.Y = std::max(run.Y, std::abs(y));
  }
  return run;
}

}  // namespace

TEST_CASE("akaar: zero responses give zero actions") {
  Akaar learner(Kernel::linear(), 8);
  for (int t = 0; t < 10; ++t) {
    Vector x = Vector::Constant(2, 0.5 + 0.1 * t);
    CHECK(learner.predict(x) == 0.0);
    learner.observe(x, 0.0);
  }
}

TEST_CASE("akaar primal fast path agrees with the generic route") {
  Akaar fast(Kernel::linear(), 10);
  Akaar slow(Kernel::linear(), 10, /*force_dual=*/true);
  const AkaarRun a = drive_akaar(fast, 40, 2, 81, 1.0);
  const AkaarRun b = drive_akaar(slow, 40, 2, 81, 1.0);
  for (int t = 0; t < 40; ++t) {
    CHECK(a.actions[t] == doctest::Approx(b.actions[t]).epsilon(1e-8));
  }
}

TEST_CASE("akaar actions stay inside the previous response range") {
  Akaar learner(Kernel::gaussian_rbf(0.8), 10);
  Rng rng(83);
  double y_prev = 0.0;
  for (int t = 0; t < 50; ++t) {
    Vector x(2);
    x << rng.uniform(-1, 1), rng.uniform(-1, 1);
    const double a = learner.predict(x);
    CHECK(std::abs(a) <= y_prev + 1e-12);
    const double y = rng.uniform(-2, 2);
    learner.observe(x, y);
    y_prev = std::max(y_prev, std::abs(y));
  }
}

TEST_CASE("akaar is invariant to kernel scale and equivariant in y") {
  Akaar base(Kernel::linear(), 12);
  const AkaarRun b = drive_akaar(base, 50, 2, 85, 1.0);

  Akaar kscaled(Kernel::linear().scaled(1e4), 12);
  const AkaarRun k = drive_akaar(kscaled, 50, 2, 85, 1.0);
  for (int t = 0; t < 50; ++t) {
    CHECK(std::abs(k.actions[t] - b.actions[t]) <=
          1e-9 * std::max(std::abs(b.actions[t]), 1e-12));
  }

  Akaar yscaled(Kernel::linear(), 12);
  const AkaarRun y = drive_akaar(yscaled, 50, 2, 85, 100.0);
  for (int t = 0; t < 50; ++t) {
    CHECK(std::abs(y.actions[t] - 100.0 * b.actions[t]) <=
          1e-9 * std::max(std::abs(100.0 * b.actions[t]), 1e-12));
  }
}

TEST_CASE("akaar regret within the parametric bound at small scale") {
  for (std::uint64_t seed : {1001, 1002, 1003, 1004, 1005}) {
    Akaar learner(Kernel::linear(), 40);
    const int T = 120;
    AkaarRun run{};
    {
      Rng rng(seed);
      for (int t = 0; t < T; ++t) {
        Vector x(2);
        x << rng.normal(), rng.normal();
        x /= x.norm();
        const double y = rng.uniform(-1, 1);
        run.actions.push_back(learner.predict(x));
        learner.observe(x, y);
        LabeledExample ex;
        ex.features = x;
        ex.response = RealResponse{Vector::Constant(1, y)};
        run.data.push_back(std::move(ex));
        run.Y = std::max(run.Y, std::abs(y));
      }
    }
    const Comparator comp =
        best_square_comparator(run.data, std::numeric_limits<double>::infinity());
    double regret = 0.0;
    for (int t = 0; t < T; ++t) {
      const double y = run.data[t].real_value()[0];
      regret += square_loss(run.actions[t], y) -
                square_loss(comp.as_vector().dot(run.data[t].features), y);
    }
    RegressionBoundParams p;
    p.theta_norm = comp.norm_value;
    p.Y = run.Y;
    p.T = T;
    p.X = 1.0;
    p.X_tstar = 1.0;
    p.d = 2;
    CHECK(regret <= regression_bound_value(RegressionBoundKind::Thm13Param, p));
  }
}

TEST_CASE("effective dimension worked examples and limits") {
  CHECK(effective_dimension(Matrix::Identity(2, 2), 1.0) == doctest::Approx(1.0));

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  CHECK(effective_dimension(diag, 1.0) == doctest::Approx(1.25));
  CHECK(effective_dimension(diag, 1e12) <= 1e-10);
  CHECK(effective_dimension(diag, 1e-12) == doctest::Approx(2.0).epsilon(1e-9));

  Matrix notpsd = Matrix::Zero(2, 2);
  notpsd(0, 0) = 1.0;
  notpsd(1, 1) = -1.0;
  CHECK_THROWS_AS(effective_dimension(notpsd, 1.0), std::invalid_argument);
}

TEST_CASE("effective dimension never exceeds min(T, trace/lambda)") {
  Rng rng(87);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + rng.uniform_int(20);
    Matrix z(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) z(i, j) = rng.normal();
    const Matrix g = z * z.transpose();
    const double lambda = std::exp(rng.uniform(-4, 4));
    const double d = effective_dimension(g, lambda);
    CHECK(d <= std::min(static_cast<double>(n), g.trace() / lambda) + 1e-9);
  }
}

TEST_CASE("capacity report worked cases") {
  const std::vector<double> lambdas{0.1, 1.0, 10.0};
  const CapacityReport zero = capacity_check(Matrix::Zero(3, 3), lambdas, 1.0, 3);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CHECK(zero.log_det[i] == 0.0);
    CHECK(zero.d_eff[i] == 0.0);
    CHECK(zero.inequality_holds[i]);
  }

  const int T = 12;
  const CapacityReport ident = capacity_check(Matrix::Identity(T, T), lambdas, 1.0, T);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double l = lambdas[i];
    CHECK(ident.log_det[i] == doctest::Approx(T * std::log1p(1.0 / l)));
    CHECK(ident.d_eff[i] == doctest::Approx(T / (1.0 + l)));
    CHECK(ident.inequality_holds[i]);
  }

  Rng rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + rng.uniform_int(30);
    Matrix z(n, n / 2 + 1);
    for (int i = 0; i < z.rows(); ++i)
      for (int j = 0; j < z.cols(); ++j) z(i, j) = rng.normal();
    const Matrix g = z * z.transpose();
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / 19.0));
    const CapacityReport rep =
        capacity_check(g, grid, std::sqrt(g.diagonal().maxCoeff()), n);
    for (bool h : rep.inequality_holds) CHECK(h);
  }
}

TEST_CASE("regression bound values") {
  RegressionBoundParams p;
  p.theta_norm = 0.0;
  p.d = 1;
  p.Y = 1;
  p.T = 10;
  p.X = 1;
  CHECK_THROWS_AS(regression_bound_value(RegressionBoundKind::Thm13Param, p),
                  std::invalid_argument);

  RegressionBoundParams c;
  c.theta_norm = 1.0;
  c.X = 1.0;
  c.Y = 1.0;
  c.T = 4.0;
  CHECK(regression_bound_value(RegressionBoundKind::Cor12DimFree, c) ==
        doctest::Approx(2.0 + 8.0 * std::log(1.5 * M_E)));

  RegressionBoundParams l;
  l.U = 1;
  l.X = 1;
  l.Y = 1;
  l.T = 16;
  CHECK(regression_bound_value(RegressionBoundKind::LowerDimFree, l) ==
        doctest::Approx(std::sqrt(2.0) / 2.0));

  l.d = 2;
  CHECK(std::isfinite(regression_bound_value(RegressionBoundKind::LowerAsym, l)));

  RegressionBoundParams cap = c;
  cap.gamma = 0.5;
  cap.C_k = 1.0;
  CHECK(std::isfinite(regression_bound_value(RegressionBoundKind::Eq14Capacity, cap)));

  // realized log-det form equals the spectrum sum
  Matrix K = Matrix::Identity(3, 3) * 2.0;
  RegressionBoundParams t11;
  t11.lambda = 2.0;
  t11.theta_norm = 1.0;
  t11.Y = 1.0;
  t11.X_tstar = 1.0;
  t11.K_T = &K;
  const double expected =
      1.0 + 0.5 * 3.0 * std::log(2.0) + 8.0 * std::log(1.5 * M_E * 1.0);
  CHECK(regression_bound_value(RegressionBoundKind::Thm11, t11) ==
        doctest::Approx(expected).epsilon(1e-12));
}
