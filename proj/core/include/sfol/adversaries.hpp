#pragma once

#include <cstdint>
#include <string>

#include "sfol/learner.hpp"
#include "sfol/types.hpp"

namespace sfol {

/// A pre-generated adversarial data sequence. Interactive constructions
/// (which look at the learner's action) are driven by sign_flip_run instead.
struct AdversaryStream {
  enum class Kind { BetaBernoulli, Rademacher, SignFlip, CyclicBasis };
  Kind kind = Kind::Rademacher;
  int T = 0;
  int d = 1;
  double U = 0.0, X = 0.0, Y = 0.0;
  std::uint64_t seed = 0;
  bool interactive = false;
  std::vector<LabeledExample> rounds;

  // beta-Bernoulli extras
  std::vector<double> p;  // per-coordinate Bernoulli parameter
  double A = 0.0;         // prior concentration ln(2 T')/U'^2
};

/// Responses +-Y from per-coordinate Bernoulli(p) sources with p drawn from
/// a symmetric beta prior; features cycle X e_1, X e_2, ... Requires the
/// curvature regime (U X / Y)^2 <= d.
AdversaryStream beta_bernoulli_stream(int T, int d, double U, double X, double Y,
                                      std::uint64_t seed);

/// Posterior-mean action (sum z_s + A)/(t-1+2A) for binary history z in {0,1}.
double bayes_optimal_action(const std::vector<int>& history, double A);

/// i.i.d. responses uniform on {-Y, +Y}; features cycle X e_i.
AdversaryStream rademacher_stream(int T, int d, double X, double Y, std::uint64_t seed);

struct SignFlipResult {
  double regret = 0.0;
  Comparator comparator;
  RegretLedger ledger;
};

/// Interactive adversary on the basis features x_t = X e_t: each response is
/// -Y sign(a_t) (sign(0) := +1), and the returned comparator points at the
/// responses with per-coordinate magnitude U/sqrt(T). Requires T <= d.
/// Guarantees regret >= min(UX, Y) Y sqrt(T) / 2 when UX <= Y.
SignFlipResult sign_flip_run(ScalarLearner& learner, int T, int d, double U, double X, double Y);

enum class LowerBoundKind {
  Prop19Finite,  // 0.36-constant finite-time form
  Prop19TDep,    // sharper T-dependent form, unit-interval normalization
  Prop20,        // (sqrt(2)/8) min(UX, Y) Y sqrt(T)
  Prop21,        // (1/2) min(UX, Y) Y sqrt(T)
  Thm14Asym,     // (d Y^2 / 2) ln(T U^2 X^2 / (d^2 Y^2))
};

struct LowerBoundParams {
  double T = 0, d = 1, U = 0, X = 0, Y = 0;
};

struct LowerBoundValue {
  double value = 0.0;
  bool in_regime = true;
  std::string note;
};

/// Numeric value of a lower-bound display. Out-of-regime parameters are
/// flagged but the value is still returned.
LowerBoundValue lower_bound_value(LowerBoundKind kind, const LowerBoundParams& p);

}  // namespace sfol
