#pragma once

#include "sfol/aggregation.hpp"
#include "sfol/types.hpp"

namespace sfol {

/// Gradient-descent iterate for square-loss prediction with step 1/(lambda+t).
struct OgdState {
  double lambda = 1.0;
  Vector theta;
  int t = 1;
};

/// theta_{t+1} = (1 - eta_t) theta_t + eta_t y_t with eta_t = 1/(lambda + t);
/// keeps the iterate inside the observed response ball.
OgdState ogd_step(const OgdState& state, const Vector& y);

/// Square-loss predictor without features: clipped aggregation of gradient
/// descent experts over lambda in {2^m : m = 0..ceil(log2 T)}.
class AggregatedGd {
 public:
  AggregatedGd(int dim, int T);

  /// Action for the upcoming round (0 while no response has been seen).
  Vector predict() const;

  /// Absorbs y_t; returns the action that was in force this round.
  Vector observe(const Vector& y);

  int num_experts() const { return static_cast<int>(experts_.size()); }
  const std::vector<OgdState>& experts() const { return experts_; }
  const ScaleState& scale() const { return scale_; }

 private:
  int dim_;
  std::vector<OgdState> experts_;
  AggregatorState aggregator_;
  ScaleState scale_;
};

/// lambda ||theta||^2 / 2 + 2 Y^2 ln(1 + T/lambda): single-expert guarantee.
double gd_bound(double lambda, double theta_norm, double Y, double T);

/// Guarantee of the aggregated predictor against a comparator of norm
/// ||theta||; at theta = 0 the range-ratio argument is pinned at its floor
/// of 8.
double thm10_bound(double theta_norm, double Y, double T);

}  // namespace sfol
