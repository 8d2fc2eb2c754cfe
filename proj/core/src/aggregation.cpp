#include "sfol/aggregation.hpp"

#include <cmath>
#include <limits>

#include "sfol/losses.hpp"

namespace sfol {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// shift so that log_sum_exp == 0; leaves an all -inf vector alone
bool normalize_log(std::vector<double>& v) {
  const double lse = log_sum_exp(v);
  if (lse == kNegInf) return false;
  for (double& x : v) x -= lse;
  return true;
}

std::vector<double> ftrl_log_weights(const AggregatorState& state, double eta) {
  std::vector<double> lw(state.log_prior.size());
  for (std::size_t m = 0; m < lw.size(); ++m) {
    lw[m] = state.log_prior[m] - eta * state.cum_loss[m];
  }
  normalize_log(lw);
  return lw;
}

AggregatorState make_state(AggregatorKind kind, const std::vector<double>& log_prior) {
  AggregatorState s;
  s.kind = kind;
  s.log_prior = log_prior;
  s.log_weights = log_prior;
  normalize_log(s.log_weights);
  s.cum_loss.assign(log_prior.size(), 0.0);
  return s;
}

}  // namespace

HyperGrid build_grid(double alpha_min, double alpha_max, int truncation_cap) {
  if (!(alpha_min > 0.0)) throw std::invalid_argument("build_grid: alpha_min must be positive");
  if (!(alpha_max > alpha_min)) {
    throw std::invalid_argument("build_grid: alpha_max must exceed alpha_min");
  }
  HyperGrid g;
  g.alpha_min = alpha_min;
  g.alpha_max = alpha_max;
  if (std::isinf(alpha_max)) {
    g.M = truncation_cap;
  } else {
    int m = 0;
    while (std::ldexp(alpha_min, m) < alpha_max) ++m;
    g.M = m;
  }
  g.values.reserve(g.M + 1);
  for (int m = 0; m <= g.M; ++m) g.values.push_back(std::ldexp(alpha_min, m));
  return g;
}

double grid_prior(int m, int M) {
  if (m < 0 || m > M) throw std::out_of_range("grid_prior: m out of range");
  return static_cast<double>(M + 2) /
         (static_cast<double>(M + 1) * (m + 1.0) * (m + 2.0));
}

std::vector<double> grid_log_prior(int M) {
  std::vector<double> lp(M + 1);
  for (int m = 0; m <= M; ++m) lp[m] = std::log(grid_prior(m, M));
  return lp;
}

std::vector<double> AggregatorState::weights() const {
  std::vector<double> w(log_weights.size());
  for (std::size_t m = 0; m < w.size(); ++m) w[m] = std::exp(log_weights[m]);
  return w;
}

AggregatorState make_logloss_aggregator(const std::vector<double>& log_prior) {
  return make_state(AggregatorKind::LogLossExact, log_prior);
}

AggregatorState make_clipped_square_aggregator(const std::vector<double>& log_prior) {
  return make_state(AggregatorKind::ClippedSquareEW, log_prior);
}

Vector logloss_mixture(const AggregatorState& state, const Matrix& expert_dists) {
  if (expert_dists.rows() != state.num_experts()) {
    throw std::invalid_argument("logloss_mixture: expert count mismatch");
  }
  for (int m = 0; m < expert_dists.rows(); ++m) {
    if (std::abs(expert_dists.row(m).sum() - 1.0) > 1e-9) {
      throw std::invalid_argument("logloss_mixture: expert density does not sum to 1");
    }
  }
  Vector mix = Vector::Zero(expert_dists.cols());
  for (int m = 0; m < expert_dists.rows(); ++m) {
    mix += std::exp(state.log_weights[m]) * expert_dists.row(m).transpose();
  }
  return mix;
}

std::pair<double, AggregatorState> logloss_update(const AggregatorState& state,
                                                  const std::vector<double>& mass_at_outcome) {
  if (static_cast<int>(mass_at_outcome.size()) != state.num_experts()) {
    throw std::invalid_argument("logloss_update: expert count mismatch");
  }
  AggregatorState next = state;
  double mixture_mass = 0.0;
  for (int m = 0; m < state.num_experts(); ++m) {
    const double p = mass_at_outcome[m];
    if (p < 0.0) throw std::invalid_argument("logloss_update: negative mass");
    mixture_mass += std::exp(state.log_weights[m]) * p;
    next.log_weights[m] += (p > 0.0) ? std::log(p) : kNegInf;
    next.cum_loss[m] += (p > 0.0) ? -std::log(p) : kInfiniteLossSentinel;
  }
  if (!normalize_log(next.log_weights)) {
    // every expert assigned zero mass; keep the pre-update posterior
    next.log_weights = state.log_weights;
  }
  next.cum_mixture_loss +=
      (mixture_mass > 0.0) ? -std::log(mixture_mass) : kInfiniteLossSentinel;
  return {mixture_mass, std::move(next)};
}

std::pair<Vector, AggregatorState> logloss_aggregate_step(const AggregatorState& state,
                                                          const Matrix& expert_dists,
                                                          int outcome_index) {
  Vector mix = logloss_mixture(state, expert_dists);
  if (outcome_index < 1 || outcome_index > expert_dists.cols()) {
    throw std::invalid_argument("logloss_aggregate_step: outcome out of range");
  }
  std::vector<double> mass(state.num_experts());
  for (int m = 0; m < state.num_experts(); ++m) mass[m] = expert_dists(m, outcome_index - 1);
  auto [mixture_mass, next] = logloss_update(state, mass);
  (void)mixture_mass;
  return {std::move(mix), std::move(next)};
}

AggregatorState ew_mix_step(const AggregatorState& state, const std::vector<double>& expert_losses,
                            double eta) {
  if (static_cast<int>(expert_losses.size()) != state.num_experts()) {
    throw std::invalid_argument("ew_mix_step: expert count mismatch");
  }
  if (eta > state.last_eta) throw std::invalid_argument("ew_mix_step: learning rate increased");
  if (!(eta >= 0.0)) throw std::invalid_argument("ew_mix_step: bad learning rate");
  AggregatorState next = state;
  for (int m = 0; m < state.num_experts(); ++m) next.cum_loss[m] += expert_losses[m];
  next.log_weights = ftrl_log_weights(next, eta);
  next.last_eta = eta;
  return next;
}

Vector clip_response(const Vector& y, double y_max_prev, double y_max) {
  if (y.norm() > y_max * (1.0 + 1e-12)) {
    throw std::invalid_argument("clip_response: scale state out of sync with response");
  }
  if (y_max_prev == 0.0) return Vector::Zero(y.size());
  return (y_max_prev / y_max) * y;
}

Vector clipped_square_compose(const AggregatorState& state,
                              const std::vector<Vector>& expert_actions, double y_max_prev,
                              int dim) {
  if (static_cast<int>(expert_actions.size()) != state.num_experts()) {
    throw std::invalid_argument("clipped_square_compose: expert count mismatch");
  }
  if (y_max_prev == 0.0) return Vector::Zero(dim);
  const double eta = 1.0 / (4.0 * y_max_prev * y_max_prev);
  const std::vector<double> lw = ftrl_log_weights(state, eta);
  Vector action = Vector::Zero(dim);
  for (int m = 0; m < state.num_experts(); ++m) {
    Vector a = expert_actions[m];
    const double n = a.norm();
    if (n > y_max_prev) a *= y_max_prev / n;
    action += std::exp(lw[m]) * a;
  }
  return action;
}

ClippedSquareStep clipped_square_aggregate_step(const AggregatorState& state,
                                                const std::vector<Vector>& expert_actions,
                                                const Vector& y, const ScaleState& scale) {
  const double Y_prev = scale.y_max_prev;
  const double Y_now = scale.y_max;
  const int dim = static_cast<int>(y.size());
  Vector action = clipped_square_compose(state, expert_actions, Y_prev, dim);

  if (Y_prev == 0.0) {
    // all clipped losses vanish, so there is nothing to learn this round
    return {std::move(action), state};
  }

  const double eta = 1.0 / (4.0 * Y_prev * Y_prev);
  const Vector y_clipped = clip_response(y, Y_prev, Y_now);
  std::vector<double> losses(state.num_experts());
  for (int m = 0; m < state.num_experts(); ++m) {
    Vector a = expert_actions[m];
    const double n = a.norm();
    if (n > Y_prev) a *= Y_prev / n;
    losses[m] = 0.5 * (a - y_clipped).squaredNorm();
  }
  AggregatorState next = ew_mix_step(state, losses, eta);
  return {std::move(action), std::move(next)};
}

}  // namespace sfol
