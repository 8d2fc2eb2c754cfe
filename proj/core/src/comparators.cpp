#include "sfol/comparators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "sfol/logistic.hpp"

namespace sfol {

namespace {

Vector solve_ridge(const Matrix& gram, const Vector& rhs, double mu) {
  if (mu == 0.0) {
    // pseudo-inverse via eigendecomposition so rank-deficient grams give the
    // minimum-norm solution
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const Vector& ev = es.eigenvalues();
    const double floor = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    Vector z = es.eigenvectors().transpose() * rhs;
    for (int i = 0; i < z.size(); ++i) z[i] = (ev[i] > floor) ? z[i] / ev[i] : 0.0;
    return es.eigenvectors() * z;
  }
  Matrix m = gram;
  m.diagonal().array() += mu;
  return m.ldlt().solve(rhs);
}

}  // namespace

Comparator best_square_comparator(const std::vector<LabeledExample>& data, double U) {
  if (data.empty()) throw std::invalid_argument("best_square_comparator: empty data");
  if (!(U > 0.0)) throw std::invalid_argument("best_square_comparator: U must be positive");
  const int d = static_cast<int>(data.front().features.size());
  Matrix gram = Matrix::Zero(d, d);
  Vector rhs = Vector::Zero(d);
  for (const auto& ex : data) {
    if (ex.is_class() || ex.real_value().size() != 1) {
      throw std::invalid_argument("best_square_comparator: scalar real responses required");
    }
    gram.noalias() += ex.features * ex.features.transpose();
    rhs.noalias() += ex.real_value()[0] * ex.features;
  }

  Vector theta = solve_ridge(gram, rhs, 0.0);
  if (!(theta.norm() > U)) {  // also covers U = infinity
    Comparator c;
    c.theta = theta.transpose();
    c.norm_value = theta.norm();
    c.norm_kind = NormKind::L2;
    return c;
  }

  // ||theta(mu)|| decreases monotonically; ||theta(mu)|| <= ||rhs||/mu gives
  // the upper bracket.
  double lo = 0.0;
  double hi = rhs.norm() / U;
  double mu = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double n = solve_ridge(gram, rhs, mid).norm();
    if (std::abs(n - U) <= 1e-10 * U) {
      mu = mid;
      break;
    }
    if (n > U) {
      lo = mid;
    } else {
      hi = mid;
    }
    mu = hi;  // feasible side
  }
  theta = solve_ridge(gram, rhs, mu);
  Comparator c;
  c.theta = theta.transpose();
  c.norm_value = theta.norm();
  c.norm_kind = NormKind::L2;
  return c;
}

double logistic_objective(const Matrix& theta, const std::vector<LabeledExample>& data) {
  double total = 0.0;
  for (const auto& ex : data) {
    const Vector p = class_probs(theta, ex.features);
    total += -std::log(std::max(p[ex.class_index() - 1], 1e-300));
  }
  return total;
}

namespace {

void project(Matrix& theta, double U, NormKind kind) {
  if (kind == NormKind::RowMaxOfL2 || kind == NormKind::TwoToInfty) {
    for (int k = 0; k < theta.rows(); ++k) {
      const double n = theta.row(k).norm();
      if (n > U) theta.row(k) *= U / n;
    }
  } else {
    const double n = theta.norm();
    if (n > U) theta *= U / n;
  }
}

}  // namespace

Comparator best_logistic_comparator(const std::vector<LabeledExample>& data, double U,
                                    int num_classes, NormKind norm_kind) {
  if (data.empty()) throw std::invalid_argument("best_logistic_comparator: empty data");
  const int d = static_cast<int>(data.front().features.size());
  const int K = num_classes;

  double curvature = 0.0;
  for (const auto& ex : data) curvature += ex.features.squaredNorm();
  // logistic loss is (1/2)-smooth in the scores
  const double step = (curvature > 0.0) ? 1.0 / (0.5 * curvature) : 1.0;

  Matrix theta = Matrix::Zero(K, d);
  constexpr int kIters = 2000;
  for (int it = 0; it < kIters; ++it) {
    Matrix grad = Matrix::Zero(K, d);
    for (const auto& ex : data) {
      Vector p = class_probs(theta, ex.features);
      p[ex.class_index() - 1] -= 1.0;
      grad.noalias() += p * ex.features.transpose();
    }
    theta.noalias() -= step * grad;
    project(theta, U, norm_kind);
  }

  Comparator c;
  c.theta = theta;
  c.norm_kind = norm_kind;
  c.norm_value = comparator_norm(theta, norm_kind);
  return c;
}

}  // namespace sfol
