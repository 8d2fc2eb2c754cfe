#include "sfol/logistic.hpp"

#include <cmath>

#include "sfol/quadrature.hpp"

namespace sfol {

Vector class_probs(const Matrix& theta, const Vector& x) {
  if (theta.cols() != x.size()) throw std::invalid_argument("class_probs: dimension mismatch");
  Vector scores = theta * x;
  const double m = scores.maxCoeff();
  Vector p = (scores.array() - m).exp();
  p /= p.sum();
  return p;
}

namespace {

Vector uniform_probs(int K) { return Vector::Constant(K, 1.0 / K); }

double log_softmax_at(const Vector& scores, int y) {
  const double m = scores.maxCoeff();
  double z = 0.0;
  for (int k = 0; k < scores.size(); ++k) z += std::exp(scores[k] - m);
  return scores[y - 1] - m - std::log(z);
}

}  // namespace

BayesLogistic::BayesLogistic(const LogisticDomain& domain) : domain_(domain) {
  if (domain.K < 2) throw std::invalid_argument("BayesLogistic: K >= 2 required");
  if (domain.d * domain.K > 4) {
    throw std::invalid_argument("BayesLogistic: d*K <= 4 at desk scale");
  }
  if (!(domain.U > 0.0)) throw std::invalid_argument("BayesLogistic: U must be positive");

  const int E = domain.effective_dims();
  const int n = domain.quad_points_per_dim > 0 ? domain.quad_points_per_dim
                                               : (E <= 2 ? 201 : 41);
  const double U = domain.U;
  const double h = 2.0 * U / n;

  // midpoint tensor grid with rejection of points outside the row-norm ball
  std::vector<int> idx(E, 0);
  std::vector<Vector> accepted;
  Vector pt(E);
  const int rows = (domain_.K == 2) ? 1 : domain_.K;
  const int row_dim = E / rows;
  for (;;) {
    for (int a = 0; a < E; ++a) pt[a] = -U + (idx[a] + 0.5) * h;
    bool inside = true;
    for (int r = 0; r < rows && inside; ++r) {
      if (pt.segment(r * row_dim, row_dim).norm() > U) inside = false;
    }
    if (inside) accepted.push_back(pt);
    int a = 0;
    while (a < E && ++idx[a] == n) idx[a++] = 0;
    if (a == E) break;
  }
  if (accepted.empty()) throw std::logic_error("BayesLogistic: empty quadrature grid");

  grid_.resize(static_cast<int>(accepted.size()), E);
  for (std::size_t j = 0; j < accepted.size(); ++j) grid_.row(j) = accepted[j];
  log_lik_.assign(accepted.size(), 0.0);
}

Vector BayesLogistic::point_scores(int j, const Vector& x) const {
  Vector scores(domain_.K);
  if (domain_.K == 2) {
    scores[0] = grid_.row(j).head(domain_.d).dot(x);
    scores[1] = 0.0;
  } else {
    for (int k = 0; k < domain_.K; ++k) {
      scores[k] = grid_.row(j).segment(k * domain_.d, domain_.d).dot(x);
    }
  }
  return scores;
}

Vector BayesLogistic::predict(const Vector& x) {
  if (x.size() != domain_.d) throw std::invalid_argument("BayesLogistic: dimension mismatch");
  double max_ll = log_lik_[0];
  for (double v : log_lik_) max_ll = std::max(max_ll, v);
  Vector mix = Vector::Zero(domain_.K);
  double total = 0.0;
  for (int j = 0; j < grid_.rows(); ++j) {
    const double w = std::exp(log_lik_[j] - max_ll);
    const Vector scores = point_scores(j, x);
    const double m = scores.maxCoeff();
    Vector p = (scores.array() - m).exp();
    p /= p.sum();
    mix += w * p;
    total += w;
  }
  mix /= total;
  return mix;
}

void BayesLogistic::observe(const Vector& x, int y) {
  if (y < 1 || y > domain_.K) throw std::invalid_argument("BayesLogistic: class out of range");
  for (int j = 0; j < grid_.rows(); ++j) {
    log_lik_[j] += log_softmax_at(point_scores(j, x), y);
  }
}

AdaptiveLogistic::AdaptiveLogistic(int d, int K, int T, double eps, int grid_cap,
                                   int quad_points_per_dim)
    : d_(d), K_(K), T_(T), eps_(eps), grid_cap_(grid_cap), quad_points_(quad_points_per_dim) {
  if (T <= 0) throw std::invalid_argument("AdaptiveLogistic: horizon required");
  if (!(eps > 0.0)) throw std::invalid_argument("AdaptiveLogistic: eps must be positive");
}

void AdaptiveLogistic::maybe_start(const Vector& x) {
  if (!experts_.empty()) return;
  const double xn = x.norm();
  if (!(xn > 0.0)) return;
  alpha_min_ = eps_ * d_ * K_ / (xn * T_);
  const HyperGrid grid =
      build_grid(alpha_min_, std::numeric_limits<double>::infinity(), grid_cap_);
  experts_.reserve(grid.values.size());
  for (double alpha : grid.values) {
    LogisticDomain dom{d_, K_, alpha, quad_points_};
    experts_.push_back(std::make_unique<BayesLogistic>(dom));
  }
  aggregator_ = make_logloss_aggregator(grid_log_prior(grid.M));
}

Vector AdaptiveLogistic::predict(const Vector& x) {
  maybe_start(x);
  if (experts_.empty()) return uniform_probs(K_);
  Matrix dists(static_cast<int>(experts_.size()), K_);
  for (std::size_t m = 0; m < experts_.size(); ++m) {
    dists.row(m) = experts_[m]->predict(x).transpose();
  }
  return logloss_mixture(aggregator_, dists);
}

void AdaptiveLogistic::observe(const Vector& x, int y) {
  maybe_start(x);
  if (experts_.empty()) return;  // zero features so far: nothing to learn
  std::vector<double> mass(experts_.size());
  for (std::size_t m = 0; m < experts_.size(); ++m) {
    mass[m] = experts_[m]->predict(x)[y - 1];
  }
  aggregator_ = logloss_update(aggregator_, mass).second;
  for (auto& e : experts_) e->observe(x, y);
}

ParamFreeLogistic::ParamFreeLogistic(int d, int K, int T, int grid_cap, int quad_points_per_dim)
    : K_(K) {
  const HyperGrid guesses =
      build_grid(1.0, std::numeric_limits<double>::infinity(), grid_cap);
  experts_.reserve(guesses.values.size());
  for (double alpha : guesses.values) {
    experts_.push_back(std::make_unique<AdaptiveLogistic>(d, K, T, M_E / alpha, grid_cap,
                                                          quad_points_per_dim));
  }
  aggregator_ = make_logloss_aggregator(grid_log_prior(guesses.M));
}

Vector ParamFreeLogistic::predict(const Vector& x) {
  Matrix dists(static_cast<int>(experts_.size()), K_);
  for (std::size_t j = 0; j < experts_.size(); ++j) {
    dists.row(j) = experts_[j]->predict(x).transpose();
  }
  return logloss_mixture(aggregator_, dists);
}

void ParamFreeLogistic::observe(const Vector& x, int y) {
  std::vector<double> mass(experts_.size());
  for (std::size_t j = 0; j < experts_.size(); ++j) {
    mass[j] = experts_[j]->predict(x)[y - 1];
  }
  aggregator_ = logloss_update(aggregator_, mass).second;
  for (auto& e : experts_) e->observe(x, y);
}

EfficientWrapper::EfficientWrapper(const EfficientWrapperConfig& config,
                                   LogisticBaseFactory factory)
    : config_(config), factory_(std::move(factory)) {
  if (config_.T <= 0) throw std::invalid_argument("EfficientWrapper: horizon required");
}

void EfficientWrapper::maybe_start(const Vector& x) {
  if (!experts_.empty()) return;
  const double xn = x.norm();
  if (!(xn > 0.0)) return;
  const double T = config_.T;
  // T^{-gamma} underflows quickly; the smallest normal double is the
  // practical floor anyway
  const double alpha_min =
      std::max(std::pow(T, -config_.gamma()), 2.2e-308) / xn;
  const double alpha_max = std::pow(T, config_.beta) / xn;
  const HyperGrid grid = build_grid(alpha_min, alpha_max);
  experts_.resize(grid.values.size());
  for (std::size_t m = 0; m < experts_.size(); ++m) {
    Expert& e = experts_[m];
    e.radius = grid.values[m];
    e.x_estimate = std::log(static_cast<double>(config_.K)) / e.radius;
    e.base = factory_(e.radius, e.x_estimate);
  }
  aggregator_ = make_logloss_aggregator(grid_log_prior(grid.M));
}

void EfficientWrapper::prepare_round(const Vector& x) {
  maybe_start(x);
  if (experts_.empty()) return;
  const double xn = x.norm();
  x_running_max_ = std::max(x_running_max_, xn);
  const double budget = 2.0 * std::pow(static_cast<double>(config_.T), config_.beta);
  for (Expert& e : experts_) {
    if (e.frozen) continue;
    if (e.radius * x_running_max_ > budget) {
      e.frozen = true;
      e.base.reset();  // stop expending computation on it
      continue;
    }
    if (xn > e.x_estimate) {
      while (xn > e.x_estimate) e.x_estimate *= 2.0;
      e.base = factory_(e.radius, e.x_estimate);
      ++restarts_;
    }
  }
}

Vector EfficientWrapper::predict(const Vector& x) {
  prepare_round(x);
  if (experts_.empty()) return uniform_probs(config_.K);
  Matrix dists(static_cast<int>(experts_.size()), config_.K);
  for (std::size_t m = 0; m < experts_.size(); ++m) {
    dists.row(m) = experts_[m].frozen ? uniform_probs(config_.K).transpose()
                                      : experts_[m].base->predict(x).transpose();
  }
  return logloss_mixture(aggregator_, dists);
}

void EfficientWrapper::observe(const Vector& x, int y) {
  prepare_round(x);
  if (experts_.empty()) return;
  std::vector<double> mass(experts_.size());
  for (std::size_t m = 0; m < experts_.size(); ++m) {
    mass[m] = experts_[m].frozen ? 1.0 / config_.K : experts_[m].base->predict(x)[y - 1];
  }
  aggregator_ = logloss_update(aggregator_, mass).second;
  for (Expert& e : experts_) {
    if (!e.frozen) e.base->observe(x, y);
  }
}

int EfficientWrapper::num_frozen() const {
  int n = 0;
  for (const Expert& e : experts_) n += e.frozen ? 1 : 0;
  return n;
}

std::vector<double> EfficientWrapper::x_estimates() const {
  std::vector<double> xs;
  xs.reserve(experts_.size());
  for (const Expert& e : experts_) xs.push_back(e.x_estimate);
  return xs;
}

std::vector<double> EfficientWrapper::radii() const {
  std::vector<double> us;
  us.reserve(experts_.size());
  for (const Expert& e : experts_) us.push_back(e.radius);
  return us;
}

std::vector<bool> EfficientWrapper::frozen_flags() const {
  std::vector<bool> fs;
  fs.reserve(experts_.size());
  for (const Expert& e : experts_) fs.push_back(e.frozen);
  return fs;
}

double bernoulli_stochastic_complexity(int n, double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) {
    throw std::invalid_argument("bernoulli_stochastic_complexity: need 0 <= a <= b <= 1");
  }
  if (n < 1 || n > 10000) {
    throw std::invalid_argument("bernoulli_stochastic_complexity: n in [1, 1e4]");
  }
  double log_sum = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    const double mu = std::clamp(static_cast<double>(k) / n, a, b);
    double lt = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    if (k > 0) {
      if (mu == 0.0) continue;  // zero likelihood term
      lt += k * std::log(mu);
    }
    if (k < n) {
      if (mu == 1.0) continue;
      lt += (n - k) * std::log1p(-mu);
    }
    log_sum = log_add_exp(log_sum, lt);
  }
  return log_sum;
}

double logistic_bound_value(LogisticBoundKind kind, const LogisticBoundParams& p) {
  const double dK = p.d * p.K;
  switch (kind) {
    case LogisticBoundKind::Thm3: {
      const double dt = p.d_theta > 0 ? p.d_theta : dK;
      if (!(dt > 0) || !(p.U >= 0) || !(p.X >= 0) || !(p.T >= 0)) {
        throw std::invalid_argument("logistic_bound_value: thm3 needs d_theta, U, X, T");
      }
      return 5.0 * dt * std::log(p.U * p.X * p.T / dt + M_E);
    }
    case LogisticBoundKind::Thm5Lower: {
      if (!(p.T > p.d) || !(p.d >= 1)) {
        throw std::invalid_argument("logistic_bound_value: thm5 needs T > d");
      }
      const double arg = p.U * p.X * std::sqrt(p.T - p.d) / (4.0 * std::sqrt(M_PI) * p.d) -
                         2.0 / std::sqrt(M_PI * (p.T / p.d - 1.0));
      return p.d * std::log(arg);
    }
    case LogisticBoundKind::Thm6: {
      if (!(p.T > 0) || !(p.X > 0) || !(p.X_tstar > 0)) {
        throw std::invalid_argument("logistic_bound_value: thm6 needs T, X, X_tstar");
      }
      const double lead =
          5.0 * dK * std::log(2.0 * p.U * p.X * p.T / dK + p.eps * p.X / p.X_tstar + M_E);
      const double inner = std::max(8.0 * p.U * p.X_tstar * p.T / (p.eps * dK), 4.0);
      return lead + 2.0 * std::log(std::log2(inner));
    }
    case LogisticBoundKind::Thm7: {
      if (!(p.T > 0) || !(p.X > 0) || !(p.X_tstar > 0)) {
        throw std::invalid_argument("logistic_bound_value: thm7 needs T, X, X_tstar");
      }
      const double lead = 5.0 * dK * std::log(2.0 * p.U * p.X * p.T / dK + 2.0 * M_E);
      const double mid = std::max(16.0 * p.U * p.X * p.T / (M_E * dK), 4.0);
      const double range = 8.0 * p.X / p.X_tstar;
      return lead + 2.0 * std::log(std::log2(mid)) + 2.0 * std::log(std::log2(range));
    }
  }
  throw std::logic_error("logistic_bound_value: unknown kind");
}

}  // namespace sfol
