#pragma once

#include "sfol/types.hpp"

namespace sfol {

/// Default truncation for grids with an unbounded upper endpoint: 64
/// doublings above alpha_min, the number of octaves a double can span
/// without the log-log overhead becoming noticeable.
inline constexpr int kDefaultGridCap = 64;

/// Exponential hyperparameter grid { alpha_min * 2^m : m = 0..M }.
struct HyperGrid {
  double alpha_min = 1.0;
  double alpha_max = 1.0;  // +infinity allowed
  int M = 0;
  std::vector<double> values;
};

/// M is the smallest integer with alpha_min * 2^M >= alpha_max, i.e.
/// ceil(log2(alpha_max/alpha_min)); an infinite alpha_max truncates to
/// truncation_cap doublings.
HyperGrid build_grid(double alpha_min, double alpha_max, int truncation_cap = kDefaultGridCap);

/// Prior mass (M+2) / ((M+1)(m+1)(m+2)) on grid index m; telescopes to
/// exactly 1 over m = 0..M.
double grid_prior(int m, int M);

/// ln grid_prior for all m.
std::vector<double> grid_log_prior(int M);

enum class AggregatorKind { LogLossExact, ClippedSquareEW };

/// Shared state of both aggregation engines. Weights live in the log domain
/// and are renormalized after every update (log-sum-exp == 0).
struct AggregatorState {
  AggregatorKind kind = AggregatorKind::LogLossExact;
  std::vector<double> log_prior;
  std::vector<double> log_weights;
  std::vector<double> cum_loss;
  double last_eta = std::numeric_limits<double>::infinity();
  // running -ln of the mixture's cumulative likelihood (log-loss flavor)
  double cum_mixture_loss = 0.0;

  int num_experts() const { return static_cast<int>(log_weights.size()); }
  std::vector<double> weights() const;
};

AggregatorState make_logloss_aggregator(const std::vector<double>& log_prior);
AggregatorState make_clipped_square_aggregator(const std::vector<double>& log_prior);

/// Posterior-weighted mean of full expert distributions (rows = experts,
/// columns = outcomes). Each row must sum to 1 within 1e-9.
Vector logloss_mixture(const AggregatorState& state, const Matrix& expert_dists);

/// Multiplicative weight update by each expert's mass at the realized
/// outcome; returns the mixture mass at that outcome and the new state.
std::pair<double, AggregatorState> logloss_update(const AggregatorState& state,
                                                  const std::vector<double>& mass_at_outcome);

/// Full mixture step over a finite outcome space: predict, then update on
/// the realized outcome (1-based index).
std::pair<Vector, AggregatorState> logloss_aggregate_step(const AggregatorState& state,
                                                          const Matrix& expert_dists,
                                                          int outcome_index);

/// FTRL exponential-weights step: absorbs the per-expert losses and
/// recomputes weights as ln prior - eta * cumulative loss. eta must be
/// non-increasing across calls.
AggregatorState ew_mix_step(const AggregatorState& state, const std::vector<double>& expert_losses,
                            double eta);

/// y scaled back to the previous response range: (Y_{t-1}/Y_t) * y.
Vector clip_response(const Vector& y, double y_max_prev, double y_max);

/// Action the clipped square-loss aggregation emits for the given expert
/// actions at response scale Y_{t-1}: FTRL weights at eta = 1/(4 Y_{t-1}^2),
/// expert actions projected to the Y_{t-1}-ball, posterior mean. Zero when
/// Y_{t-1} = 0.
Vector clipped_square_compose(const AggregatorState& state,
                              const std::vector<Vector>& expert_actions, double y_max_prev,
                              int dim);

struct ClippedSquareStep {
  Vector action;
  AggregatorState state;
};

/// One round of the clipped square-loss aggregation: expert actions are
/// projected to the ball of radius Y_{t-1}, the emitted action is their
/// posterior mean, and weights are updated on the clipped losses with
/// eta = 1/(4 Y_{t-1}^2). A round with Y_{t-1} = 0 emits 0 and leaves the
/// state untouched. `scale` must already include round t's response.
ClippedSquareStep clipped_square_aggregate_step(const AggregatorState& state,
                                                const std::vector<Vector>& expert_actions,
                                                const Vector& y, const ScaleState& scale);

}  // namespace sfol
