#include "sfol/regression.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace sfol {

namespace {

double solve_dual(const Kernel& kernel, const std::vector<Vector>& xs,
                  const std::vector<double>& ys, const Vector& x, double lambda) {
  const int t = static_cast<int>(xs.size()) + 1;
  Matrix m(t, t);
  for (int i = 0; i < t - 1; ++i) {
    for (int j = 0; j <= i; ++j) {
      m(i, j) = kernel(xs[i], xs[j]);
      m(j, i) = m(i, j);
    }
  }
  for (int i = 0; i < t - 1; ++i) {
    m(t - 1, i) = kernel(x, xs[i]);
    m(i, t - 1) = m(t - 1, i);
  }
  m(t - 1, t - 1) = kernel(x, x);
  Vector kvec = m.col(t - 1);
  m.diagonal().array() += lambda;
  const Vector z = m.ldlt().solve(kvec);
  double a = 0.0;
  for (int i = 0; i < t - 1; ++i) a += ys[i] * z[i];
  return a;
}

}  // namespace

double kaar_predict(const KaarState& state, const Vector& x) {
  if (!(state.lambda > 0.0)) throw std::invalid_argument("kaar_predict: lambda must be positive");
  if (state.xs.empty()) return 0.0;
  return solve_dual(state.kernel, state.xs, state.ys, x, state.lambda);
}

double kaar_sf_predict(const KaarState& state, const Vector& x, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("kaar_sf_predict: alpha must be positive");
  double k_star = 0.0;
  if (state.first_nonzero_k) {
    const Vector& anchor = state.xs[*state.first_nonzero_k - 1];
    k_star = state.kernel(anchor, anchor);
  } else if (state.kernel(x, x) > 0.0) {
    // this round is t*; prediction is 0 regardless (empty effective history)
    k_star = state.kernel(x, x);
  } else {
    return 0.0;
  }
  if (state.xs.empty()) return 0.0;
  return solve_dual(state.kernel, state.xs, state.ys, x, alpha * k_star);
}

KaarState kaar_observe(KaarState state, const Vector& x, double y) {
  state.xs.push_back(x);
  state.ys.push_back(y);
  if (!state.first_nonzero_k && state.kernel(x, x) > 0.0) {
    state.first_nonzero_k = static_cast<int>(state.xs.size());
  }
  return state;
}

KaarLearner::KaarLearner(Kernel kernel, double lambda) {
  state_.kernel = kernel;
  state_.lambda = lambda;
}

double KaarLearner::predict(const Vector& x) { return kaar_predict(state_, x); }

void KaarLearner::observe(const Vector& x, double y) {
  state_ = kaar_observe(std::move(state_), x, y);
}

KaarSfLearner::KaarSfLearner(Kernel kernel, double alpha) : alpha_(alpha) {
  state_.kernel = kernel;
}

double KaarSfLearner::predict(const Vector& x) { return kaar_sf_predict(state_, x, alpha_); }

void KaarSfLearner::observe(const Vector& x, double y) {
  state_ = kaar_observe(std::move(state_), x, y);
}

Akaar::Akaar(Kernel kernel, int grid_cap, bool force_dual)
    : kernel_(kernel), cap_(grid_cap),
      dual_(force_dual || kernel.kind() != Kernel::Kind::LinearDot) {
  if (grid_cap < 1) throw std::invalid_argument("Akaar: grid_cap >= 1 required");
  const std::vector<double> prior = grid_log_prior(cap_);
  inner_.assign(cap_ + 1, make_clipped_square_aggregator(prior));
  outer_ = make_clipped_square_aggregator(prior);
}

void Akaar::ensure_round(const Vector& x) {
  if (pending_) throw std::logic_error("Akaar: predict called twice in a round");
  if (stream_dim_ < 0) {
    stream_dim_ = static_cast<int>(x.size());
    if (!dual_) {
      stats_ = Matrix::Zero(stream_dim_, stream_dim_);
      xb_ = Vector::Zero(stream_dim_);
    }
  }
  if (x.size() != stream_dim_) throw std::invalid_argument("Akaar: dimension mismatch");
  if (!tstar_ && kernel_(x, x) > 0.0) {
    tstar_ = scale_.round + 1;
    k_star_ = kernel_(x, x);
  }
  if (dual_) {
    const int t = static_cast<int>(xs_.size()) + 1;
    Matrix g(t, t);
    if (t > 1) g.topLeftCorner(t - 1, t - 1) = gram_;
    for (int i = 0; i < t - 1; ++i) {
      g(t - 1, i) = kernel_(x, xs_[i]);
      g(i, t - 1) = g(t - 1, i);
    }
    g(t - 1, t - 1) = kernel_(x, x);
    gram_ = std::move(g);
    xs_.push_back(x);
  } else {
    stats_.noalias() += x * x.transpose();
  }
  pending_ = true;
}

std::vector<double> Akaar::alpha_predictions(const Vector& x) const {
  std::vector<double> preds(2 * cap_ + 1, 0.0);
  if (!tstar_) return preds;
  const double scale = kernel_.scale_factor();
  for (int idx = 0; idx < 2 * cap_ + 1; ++idx) {
    const double lambda = std::ldexp(k_star_, idx - cap_);  // 2^{m-j} * k(x_*,x_*)
    if (dual_) {
      const int t = static_cast<int>(xs_.size());
      Matrix m = gram_;
      m.diagonal().array() += lambda;
      const Vector z = m.ldlt().solve(gram_.col(t - 1));
      double a = 0.0;
      for (std::size_t i = 0; i < ys_.size(); ++i) a += ys_[i] * z[i];
      preds[idx] = a;
    } else {
      Matrix m = scale * stats_;
      m.diagonal().array() += lambda;
      preds[idx] = scale * xb_.dot(m.ldlt().solve(x));
    }
  }
  return preds;
}

double Akaar::predict(const Vector& x) {
  ensure_round(x);
  cached_alpha_preds_ = alpha_predictions(x);

  const double Y_prev = scale_.y_max;
  if (Y_prev == 0.0) return 0.0;
  std::vector<Vector> outer_actions(cap_ + 1);
  for (int j = 0; j <= cap_; ++j) {
    std::vector<Vector> inner_actions(cap_ + 1);
    for (int m = 0; m <= cap_; ++m) {
      inner_actions[m] = Vector::Constant(1, cached_alpha_preds_[cap_ + m - j]);
    }
    outer_actions[j] = clipped_square_compose(inner_[j], inner_actions, Y_prev, 1);
  }
  return clipped_square_compose(outer_, outer_actions, Y_prev, 1)[0];
}

void Akaar::observe(const Vector& x, double y) {
  if (!pending_) {
    predict(x);  // tolerate observe-only driving
  }
  LabeledExample ex;
  ex.features = x;
  ex.response = RealResponse{Vector::Constant(1, y)};
  scale_ = update_scale(scale_, ex, stream_dim_);

  const Vector yv = Vector::Constant(1, y);
  std::vector<Vector> outer_actions(cap_ + 1);
  for (int j = 0; j <= cap_; ++j) {
    std::vector<Vector> inner_actions(cap_ + 1);
    for (int m = 0; m <= cap_; ++m) {
      inner_actions[m] = Vector::Constant(1, cached_alpha_preds_[cap_ + m - j]);
    }
    auto step = clipped_square_aggregate_step(inner_[j], inner_actions, yv, scale_);
    outer_actions[j] = std::move(step.action);
    inner_[j] = std::move(step.state);
  }
  outer_ = clipped_square_aggregate_step(outer_, outer_actions, yv, scale_).state;

  if (dual_) ys_.push_back(y);
  else xb_.noalias() += y * x;
  pending_ = false;
}

double effective_dimension(const Matrix& kernel_matrix, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("effective_dimension: lambda > 0 required");
  if (kernel_matrix.rows() != kernel_matrix.cols()) {
    throw std::invalid_argument("effective_dimension: square matrix required");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(kernel_matrix);
  const Vector& ev = es.eigenvalues();
  const double trace = kernel_matrix.trace();
  if (ev.minCoeff() < -1e-8 * std::max(trace, 1.0)) {
    throw std::invalid_argument("effective_dimension: matrix is not PSD");
  }
  double d = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    const double mu = std::max(ev[i], 0.0);
    d += mu / (mu + lambda);
  }
  return d;
}

CapacityReport capacity_check(const Matrix& kernel_matrix, const std::vector<double>& lambda_grid,
                              double X, int T) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(kernel_matrix);
  const Vector& ev = es.eigenvalues();
  const double trace = kernel_matrix.trace();
  if (ev.minCoeff() < -1e-8 * std::max(trace, 1.0)) {
    throw std::invalid_argument("capacity_check: matrix is not PSD");
  }
  CapacityReport report;
  report.lambda_grid = lambda_grid;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw std::invalid_argument("capacity_check: lambda > 0 required");
    double log_det = 0.0;
    double d_eff = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
      const double mu = std::max(ev[i], 0.0);
      log_det += std::log1p(mu / lambda);
      d_eff += mu / (mu + lambda);
    }
    report.log_det.push_back(log_det);
    report.d_eff.push_back(d_eff);
    const double rhs = d_eff * (1.0 + std::log1p(T * X * X / lambda));
    report.inequality_holds.push_back(log_det <= rhs);
  }
  return report;
}

namespace {

// 8 Y^2 ln((3e/2) |log2(arg)|)
double loglog_overhead(double Y, double arg) {
  return 8.0 * Y * Y * std::log(1.5 * M_E * std::abs(std::log2(arg)));
}

}  // namespace

double regression_bound_value(RegressionBoundKind kind, const RegressionBoundParams& p) {
  const double X_tstar = (p.X_tstar > 0.0) ? p.X_tstar : p.X;
  switch (kind) {
    case RegressionBoundKind::Thm11: {
      if (p.K_T == nullptr || !(p.lambda > 0.0)) {
        throw std::invalid_argument("regression_bound_value: thm11 needs K_T and lambda");
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(*p.K_T);
      double log_det = 0.0;
      for (int i = 0; i < es.eigenvalues().size(); ++i) {
        log_det += std::log1p(std::max(es.eigenvalues()[i], 0.0) / p.lambda);
      }
      return 0.5 * p.lambda * p.theta_norm * p.theta_norm + 0.5 * p.Y * p.Y * log_det +
             loglog_overhead(p.Y, p.lambda / (X_tstar * X_tstar));
    }
    case RegressionBoundKind::Cor12DimFree: {
      if (!(p.theta_norm > 0.0)) {
        throw std::invalid_argument("regression_bound_value: cor12 needs ||theta|| > 0");
      }
      const double lead = p.X * p.Y * p.theta_norm * std::sqrt(p.T);
      const double arg = p.X * p.Y * std::sqrt(p.T) / (p.theta_norm * X_tstar * X_tstar);
      return lead + loglog_overhead(p.Y, arg);
    }
    case RegressionBoundKind::Thm13Param: {
      if (!(p.theta_norm > 0.0)) {
        throw std::invalid_argument("regression_bound_value: thm13 needs ||theta|| > 0");
      }
      if (!(p.d >= 1.0)) {
        throw std::invalid_argument("regression_bound_value: thm13 needs d");
      }
      const double dY2 = p.d * p.Y * p.Y;
      const double fit = 0.5 * dY2 *
                         std::log1p(p.T * p.theta_norm * p.theta_norm * p.X * p.X /
                                    (p.d * p.d * p.Y * p.Y));
      const double arg = dY2 / (p.theta_norm * X_tstar * X_tstar);
      return fit + 0.5 * dY2 + loglog_overhead(p.Y, arg);
    }
    case RegressionBoundKind::Eq14Capacity: {
      if (!(p.gamma > 0.0) || !(p.C_k > 0.0) || !(p.theta_norm > 0.0)) {
        throw std::invalid_argument("regression_bound_value: eq14 needs gamma, C_k, theta");
      }
      const double g = p.gamma;
      const double lead = std::pow(p.Y, 2.0 / (1.0 + g)) *
                          std::pow(p.theta_norm, 2.0 * g / (1.0 + g)) *
                          std::pow(p.C_k * p.T, 2.0 * g / (1.0 + g));
      const double inner = 1.0 + p.X * p.X *
                                     std::pow(p.theta_norm * p.theta_norm * std::pow(p.T, g) /
                                                  (p.Y * p.Y * std::pow(p.C_k, g)),
                                              1.0 / (1.0 + g));
      const double first = lead * (0.5 + std::pow(2.0, g - 1.0) + std::log(inner));
      const double arg = p.Y * p.Y * std::pow(p.T * p.C_k, g) /
                         (p.theta_norm * p.theta_norm * std::pow(X_tstar, 2.0 + 2.0 * g));
      const double tail =
          8.0 * p.Y * p.Y *
          std::log(3.0 * M_E / (2.0 * (1.0 + g)) * std::abs(std::log2(arg)));
      return first + tail;
    }
    case RegressionBoundKind::LowerAsym: {
      if (!(p.d >= 1.0) || !(p.U > 0.0)) {
        throw std::invalid_argument("regression_bound_value: lower-asym needs d, U");
      }
      return 0.5 * p.d * p.Y * p.Y *
             std::log(p.T * p.U * p.U * p.X * p.X / (p.d * p.d * p.Y * p.Y));
    }
    case RegressionBoundKind::LowerDimFree:
      return std::sqrt(2.0) / 8.0 * p.U * p.X * p.Y * std::sqrt(p.T);
  }
  throw std::logic_error("regression_bound_value: unknown kind");
}

}  // namespace sfol
