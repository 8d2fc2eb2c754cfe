#pragma once

#include "sfol/types.hpp"

namespace sfol {

enum class LossKind { Log, Square, Logistic };

/// Sentinel for the log loss of a zero-probability event. Large but finite
/// so cumulative ledgers stay totalable.
inline constexpr double kInfiniteLossSentinel = 1e308;

/// Log / logistic loss of a probability mass tuple at a class response, or
/// half squared distance for real predictions.
double eval_loss(LossKind kind, const Vector& prediction, const Response& response);

/// Half squared distance between scalars; convenience overload.
inline double square_loss(double a, double y) {
  const double d = a - y;
  return 0.5 * d * d;
}

}  // namespace sfol
