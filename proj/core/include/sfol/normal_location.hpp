#pragma once

#include <functional>

#include "sfol/aggregation.hpp"
#include "sfol/types.hpp"

namespace sfol {

/// Gaussian density model with known sigma, dimension d and horizon T.
struct NormalLocationModel {
  double sigma = 1.0;
  int d = 1;
  int T = 1;
};

/// Exact minimax log-loss regret against mean vectors in the ball of radius
/// U: (d/2) ln(T U^2/sigma^2 / (2 Gamma(d/2+1)^{2/d})) + V(U, T), with the
/// lower-order V term evaluated by adaptive quadrature (abs. tol. 1e-8).
double minimax_regret_value(double U, const NormalLocationModel& model);

/// The lower-order term V(U, T); ln(1 + sqrt(pi)/(sqrt(2T) U/sigma)) at d=1.
double normal_location_v_term(double U, const NormalLocationModel& model);

/// Independent route to the same value: direct numerical integration of the
/// reduced radial form of the normalizing constant, on a fixed Simpson grid.
/// Restricted to d <= 3. Cross-checks minimax_regret_value end to end.
double nml_normalizer_oracle(double U, const NormalLocationModel& model);

/// Conditional density of the next observation under the exact minimax
/// strategy, d = 1 only. The returned callable evaluates the predictive
/// density at a point; it integrates to 1 over the real line.
std::function<double(double)> nml_conditional_predict_1d(const std::vector<double>& history,
                                                         double U,
                                                         const NormalLocationModel& model);

/// Regret guarantee of the radius-adaptive predictor against a comparator of
/// norm ||theta||.
double adaptive_normal_bound(double theta_norm, const NormalLocationModel& model);

/// Radius-adaptive predictor: mixture of conditional minimax predictors over
/// the doubling grid of squared radii alpha, alpha_min = sigma^2/T. d = 1.
class AdaptiveNormalPredictor {
 public:
  explicit AdaptiveNormalPredictor(const NormalLocationModel& model,
                                   int grid_cap = kDefaultGridCap);

  /// Mixture predictive density at y for the upcoming round.
  double predict_density(double y) const;

  /// Absorbs the round's observation; returns the mixture's log-loss.
  double observe(double y);

  double cumulative_loss() const { return aggregator_.cum_mixture_loss; }
  const AggregatorState& aggregator() const { return aggregator_; }
  int num_experts() const { return static_cast<int>(radii_.size()); }

 private:
  NormalLocationModel model_;
  std::vector<double> radii_;  // U_m = sqrt(alpha_m)
  AggregatorState aggregator_;
  std::vector<double> history_;
  double history_sum_ = 0.0;
  // cached log G_{t-1}(S_{t-1}) per expert, the previous round's numerator
  std::vector<double> log_denom_;
};

}  // namespace sfol
