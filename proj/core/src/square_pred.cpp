#include "sfol/square_pred.hpp"

#include <cmath>

namespace sfol {

OgdState ogd_step(const OgdState& state, const Vector& y) {
  if (state.theta.size() != y.size()) throw std::invalid_argument("ogd_step: dimension mismatch");
  const double eta = 1.0 / (state.lambda + state.t);
  OgdState next = state;
  next.theta = (1.0 - eta) * state.theta + eta * y;
  next.t = state.t + 1;
  return next;
}

AggregatedGd::AggregatedGd(int dim, int T) : dim_(dim) {
  if (T < 1) throw std::invalid_argument("AggregatedGd: horizon required");
  const int M = static_cast<int>(std::ceil(std::log2(static_cast<double>(T))));
  for (int m = 0; m <= M; ++m) {
    experts_.push_back(OgdState{std::ldexp(1.0, m), Vector::Zero(dim), 1});
  }
  aggregator_ = make_clipped_square_aggregator(grid_log_prior(M));
}

Vector AggregatedGd::predict() const {
  std::vector<Vector> actions;
  actions.reserve(experts_.size());
  for (const auto& e : experts_) actions.push_back(e.theta);
  return clipped_square_compose(aggregator_, actions, scale_.y_max, dim_);
}

Vector AggregatedGd::observe(const Vector& y) {
  if (y.size() != dim_) throw std::invalid_argument("AggregatedGd: dimension mismatch");
  LabeledExample ex;
  ex.features = Vector::Zero(0);
  ex.response = RealResponse{y};
  scale_ = update_scale(scale_, ex, 0);

  std::vector<Vector> actions;
  actions.reserve(experts_.size());
  for (const auto& e : experts_) actions.push_back(e.theta);
  auto step = clipped_square_aggregate_step(aggregator_, actions, y, scale_);
  aggregator_ = std::move(step.state);
  for (auto& e : experts_) e = ogd_step(e, y);
  return step.action;
}

double gd_bound(double lambda, double theta_norm, double Y, double T) {
  return 0.5 * lambda * theta_norm * theta_norm + 2.0 * Y * Y * std::log1p(T / lambda);
}

double thm10_bound(double theta_norm, double Y, double T) {
  if (Y == 0.0) return 0.0;
  const double r2 = theta_norm * theta_norm / (Y * Y);
  const double fit = 2.0 * Y * Y * std::log(2.0 + T * std::min(r2, 1.0));
  const double ratio = (theta_norm > 0.0) ? std::max(8.0 / r2, 8.0) : 8.0;
  const double overhead = 8.0 * Y * Y * std::log(std::log2(ratio));
  return fit + overhead + 3.0 * Y * Y;
}

}  // namespace sfol
