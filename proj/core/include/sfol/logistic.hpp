#pragma once

#include <functional>
#include <memory>

#include "sfol/aggregation.hpp"
#include "sfol/learner.hpp"
#include "sfol/types.hpp"

namespace sfol {

/// softmax(theta * x), computed with max subtraction. Strictly positive.
Vector class_probs(const Matrix& theta, const Vector& x);

/// Parameter ball and quadrature resolution for the Bayes predictor. K = 2
/// fixes the second weight row to zero, so the grid only spans d axes.
struct LogisticDomain {
  int d = 1;
  int K = 2;
  double U = 1.0;
  int quad_points_per_dim = 0;  // 0: 201 for <= 2 effective axes, else 41

  int effective_dims() const { return K == 2 ? d : d * K; }
};

/// Posterior-mixture predictor over a midpoint tensor grid on the ball
/// { theta : max_k ||theta_k||_2 <= U }, uniform prior. Desk-scale only:
/// d*K <= 4.
class BayesLogistic : public ProbLearner {
 public:
  explicit BayesLogistic(const LogisticDomain& domain);

  Vector predict(const Vector& x) override;
  void observe(const Vector& x, int y) override;
  int num_classes() const override { return domain_.K; }

  int grid_size() const { return static_cast<int>(log_lik_.size()); }

 private:
  Vector point_scores(int j, const Vector& x) const;  // theta_j * x

  LogisticDomain domain_;
  Matrix grid_;  // one row per accepted grid point, flattened K x d (or d for K=2)
  std::vector<double> log_lik_;
};

/// Scale-free radius-adaptive logistic learner: uniform until the first
/// nonzero feature, then a mixture of Bayes predictors over the doubling
/// radius grid anchored at eps*d*K/(X_{t*} T).
class AdaptiveLogistic : public ProbLearner {
 public:
  AdaptiveLogistic(int d, int K, int T, double eps = 2.2e-308,
                   int grid_cap = kDefaultGridCap, int quad_points_per_dim = 0);

  Vector predict(const Vector& x) override;
  void observe(const Vector& x, int y) override;
  int num_classes() const override { return K_; }

  bool started() const { return !experts_.empty(); }
  int num_experts() const { return static_cast<int>(experts_.size()); }
  const AggregatorState& aggregator() const { return aggregator_; }
  double grid_alpha_min() const { return alpha_min_; }

 private:
  void maybe_start(const Vector& x);

  int d_, K_, T_;
  double eps_;
  int grid_cap_;
  int quad_points_;
  double alpha_min_ = 0.0;
  std::vector<std::unique_ptr<BayesLogistic>> experts_;
  AggregatorState aggregator_;
};

/// Fully parameter-free variant: an outer mixture over guesses of the
/// feature range ratio, each inner expert an AdaptiveLogistic with
/// eps = e / guess.
class ParamFreeLogistic : public ProbLearner {
 public:
  ParamFreeLogistic(int d, int K, int T, int grid_cap = kDefaultGridCap,
                    int quad_points_per_dim = 0);

  Vector predict(const Vector& x) override;
  void observe(const Vector& x, int y) override;
  int num_classes() const override { return K_; }

  int num_outer_experts() const { return static_cast<int>(experts_.size()); }

 private:
  int K_;
  std::vector<std::unique_ptr<AdaptiveLogistic>> experts_;
  AggregatorState aggregator_;
};

using LogisticBaseFactory =
    std::function<std::unique_ptr<ProbLearner>(double U, double X)>;

struct EfficientWrapperConfig {
  double beta = 1.0;
  double c = 10.0;
  int d = 1;
  int K = 2;
  int T = 0;  // required

  double gamma() const { return c * std::pow(static_cast<double>(T), beta) / (d * d * K); }
};

/// Radius grid around a pluggable base algorithm: each grid expert owns a
/// base instance restarted under a doubling feature-scale estimate, and is
/// frozen to the uniform prediction once its radius can no longer matter.
class EfficientWrapper : public ProbLearner {
 public:
  EfficientWrapper(const EfficientWrapperConfig& config, LogisticBaseFactory factory);

  Vector predict(const Vector& x) override;
  void observe(const Vector& x, int y) override;
  int num_classes() const override { return config_.K; }

  int num_experts() const { return static_cast<int>(experts_.size()); }
  int num_frozen() const;
  int restart_count() const { return restarts_; }
  std::vector<double> x_estimates() const;
  std::vector<double> radii() const;
  std::vector<bool> frozen_flags() const;

 private:
  struct Expert {
    double radius = 0.0;       // U_m
    double x_estimate = 0.0;   // doubling scale guess, starts at ln(K)/U_m
    bool frozen = false;
    std::unique_ptr<ProbLearner> base;
  };

  void maybe_start(const Vector& x);
  void prepare_round(const Vector& x);  // idempotent for a fixed x

  EfficientWrapperConfig config_;
  LogisticBaseFactory factory_;
  double x_running_max_ = 0.0;
  std::vector<Expert> experts_;
  AggregatorState aggregator_;
  int restarts_ = 0;
};

/// ln of the summed maximum Bernoulli likelihood over [a, b] across all
/// length-n outcome counts; the exact minimax value of the restricted
/// Bernoulli game.
double bernoulli_stochastic_complexity(int n, double a, double b);

enum class LogisticBoundKind { Thm3, Thm5Lower, Thm6, Thm7 };

struct LogisticBoundParams {
  double d = 1;
  double K = 2;
  double d_theta = 0;  // 0: defaults to d*K
  double U = 0;        // comparator norm (or ||theta|| for thm6/7)
  double X = 0;        // feature bound / running max X_T
  double T = 0;
  double X_tstar = 0;  // first nonzero feature norm
  double eps = 2.2e-308;
};

double logistic_bound_value(LogisticBoundKind kind, const LogisticBoundParams& p);

}  // namespace sfol
