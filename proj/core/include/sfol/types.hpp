#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace sfol {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Response of one round: a class index in [1..K] or a real vector.
struct ClassResponse {
  int index = 1;  // 1-based
};
struct RealResponse {
  Vector value;
};
using Response = std::variant<ClassResponse, RealResponse>;

/// One round of a supervised stream: features x_t and response y_t.
struct LabeledExample {
  Vector features;
  Response response;

  bool is_class() const { return std::holds_alternative<ClassResponse>(response); }
  int class_index() const { return std::get<ClassResponse>(response).index; }
  const Vector& real_value() const { return std::get<RealResponse>(response).value; }
};

/// Running data scales: X_t = max_{s<=t} ||x_s||, Y_t = max_{s<=t} ||y_s||,
/// plus the first round t* with a nonzero feature. Everything scale-free in
/// this library is anchored on these quantities.
struct ScaleState {
  double x_max = 0.0;
  double y_max = 0.0;
  double y_max_prev = 0.0;
  std::optional<int> first_nonzero_x;  // t*, 1-based round index
  int round = 0;                       // t of the last absorbed example
};

/// Absorbs round-(state.round + 1) data into the running maxima.
/// Class responses leave y_max untouched; y_max_prev always shifts.
ScaleState update_scale(const ScaleState& state, const LabeledExample& ex, int stream_dim);

/// Per-round loss bookkeeping against a fixed comparator.
class RegretLedger {
 public:
  void record(double learner_loss, double comparator_loss) {
    per_round_.emplace_back(learner_loss, comparator_loss);
    cum_regret_ += learner_loss - comparator_loss;
  }

  double cum_regret() const { return cum_regret_; }
  const std::vector<std::pair<double, double>>& per_round() const { return per_round_; }

  /// Recomputes the cumulative regret from scratch (consistency checks).
  double recompute() const {
    double r = 0.0;
    for (const auto& [l, c] : per_round_) r += l - c;
    return r;
  }

  std::optional<double> bound_value;

 private:
  std::vector<std::pair<double, double>> per_round_;
  double cum_regret_ = 0.0;
};

enum class NormKind { RowMaxOfL2, L2, RkhsNorm, TwoToInfty };

/// A fixed comparator: a weight matrix (logistic, K x d) or a vector
/// (regression / prediction), together with its declared norm.
struct Comparator {
  Matrix theta;  // K x d; vector comparators use a single row
  double norm_value = 0.0;
  NormKind norm_kind = NormKind::L2;

  Vector as_vector() const { return theta.row(0).transpose(); }
};

double comparator_norm(const Matrix& theta, NormKind kind);

}  // namespace sfol
