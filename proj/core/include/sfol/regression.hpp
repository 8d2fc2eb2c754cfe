#pragma once

#include <optional>

#include "sfol/aggregation.hpp"
#include "sfol/kernels.hpp"
#include "sfol/learner.hpp"

namespace sfol {

/// History and regularizer of a kernel ridge-style forecaster.
struct KaarState {
  Kernel kernel = Kernel::linear();
  double lambda = 1.0;
  std::vector<Vector> xs;
  std::vector<double> ys;
  std::optional<int> first_nonzero_k;  // first stored round with k(x,x) > 0
};

/// Closed-form prediction at x for the fixed regularizer state.lambda:
/// (y_1..y_{t-1}, 0) (lambda I + K_t)^{-1} (k(x_1,x) .. k(x_t,x)), where the
/// kernel matrix includes the current point. Fresh SPD solve per call.
double kaar_predict(const KaarState& state, const Vector& x);

/// Scale-free flavor: predicts 0 until some point has k(x,x) > 0, then runs
/// the closed form with lambda = alpha * k(x_{t*}, x_{t*}). Invariant under
/// k -> c*k.
double kaar_sf_predict(const KaarState& state, const Vector& x, double alpha);

/// Appends the round and maintains the first-nonzero marker.
KaarState kaar_observe(KaarState state, const Vector& x, double y);

/// Fixed-lambda forecaster as an online learner.
class KaarLearner : public ScalarLearner {
 public:
  KaarLearner(Kernel kernel, double lambda);
  double predict(const Vector& x) override;
  void observe(const Vector& x, double y) override;

 private:
  KaarState state_;
};

/// Single scale-free instance with regularizer multiplier alpha.
class KaarSfLearner : public ScalarLearner {
 public:
  KaarSfLearner(Kernel kernel, double alpha);
  double predict(const Vector& x) override;
  void observe(const Vector& x, double y) override;

 private:
  KaarState state_;
  double alpha_;
};

/// Doubly aggregated scale-free kernel regression: an outer clipped
/// exponential-weights grid over coarse scales c = 2^j, inner grids over
/// alpha = 2^m / c. Distinct effective regularizers collapse to the 2P+1
/// exponents m - j, which are computed once per round and shared.
///
/// Linear kernels use the equivalent d x d normal-equations form of the
/// closed-form update; other kernels solve the t x t system. Protocol:
/// predict(x) then observe(x, y), once each per round.
class Akaar : public ScalarLearner {
 public:
  Akaar(Kernel kernel, int grid_cap = 40, bool force_dual = false);

  double predict(const Vector& x) override;
  void observe(const Vector& x, double y) override;

  int grid_cap() const { return cap_; }
  const ScaleState& scale() const { return scale_; }

 private:
  void ensure_round(const Vector& x);
  std::vector<double> alpha_predictions(const Vector& x) const;

  Kernel kernel_;
  int cap_;
  bool dual_;
  std::optional<int> tstar_;
  double k_star_ = 0.0;

  // linear path: running second-moment matrix (includes the current x after
  // ensure_round) and response-weighted feature sum
  Matrix stats_;
  Vector xb_;
  // dual path
  std::vector<Vector> xs_;
  std::vector<double> ys_;
  Matrix gram_;

  std::vector<AggregatorState> inner_;  // one per outer expert j
  AggregatorState outer_;
  ScaleState scale_;

  bool pending_ = false;
  std::vector<double> cached_alpha_preds_;
  int stream_dim_ = -1;
};

/// Tr(K (K + lambda I)^{-1}) via eigendecomposition. Input must be PSD up to
/// -1e-8 * trace.
double effective_dimension(const Matrix& kernel_matrix, double lambda);

struct CapacityReport {
  std::vector<double> lambda_grid;
  std::vector<double> d_eff;
  std::vector<double> log_det;
  std::vector<bool> inequality_holds;
};

/// Checks ln det(I + K/lambda) <= d_eff(lambda) (1 + ln(1 + T X^2/lambda))
/// across a grid of regularizers. X is the feature-norm bound, so X^2 caps
/// the kernel diagonal.
CapacityReport capacity_check(const Matrix& kernel_matrix, const std::vector<double>& lambda_grid,
                              double X, int T);

enum class RegressionBoundKind {
  Thm11,         // realized log-det form
  Cor12DimFree,  // X Y ||theta|| sqrt(T) form
  Thm13Param,    // finite-dimensional parametric form
  Eq14Capacity,  // capacity-condition form
  LowerAsym,     // asymptotic lower value (d Y^2/2) ln(T U^2 X^2 / (d^2 Y^2))
  LowerDimFree,  // (sqrt(2)/8) U X Y sqrt(T)
};

struct RegressionBoundParams {
  double lambda = 0.0;
  double theta_norm = 0.0;
  double Y = 0.0;
  double T = 0.0;
  double X = 0.0;
  double X_tstar = 0.0;  // defaults to X when unset
  double d = 0.0;
  double gamma = 0.0;  // capacity exponent
  double C_k = 0.0;    // capacity constant
  double U = 0.0;
  const Matrix* K_T = nullptr;  // realized kernel matrix, Thm11 only
};

double regression_bound_value(RegressionBoundKind kind, const RegressionBoundParams& p);

}  // namespace sfol
