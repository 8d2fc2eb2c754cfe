#include "sfol/types.hpp"

namespace sfol {

ScaleState update_scale(const ScaleState& state, const LabeledExample& ex, int stream_dim) {
  if (ex.features.size() != stream_dim) {
    throw std::invalid_argument("update_scale: feature dimension mismatch");
  }
  ScaleState next = state;
  next.round = state.round + 1;
  const double xn = ex.features.norm();
  next.x_max = std::max(state.x_max, xn);
  next.y_max_prev = state.y_max;
  if (!ex.is_class()) {
    next.y_max = std::max(state.y_max, ex.real_value().norm());
  }
  if (!next.first_nonzero_x && xn > 0.0) {
    next.first_nonzero_x = next.round;
  }
  return next;
}

double comparator_norm(const Matrix& theta, NormKind kind) {
  switch (kind) {
    case NormKind::RowMaxOfL2: {
      double m = 0.0;
      for (int k = 0; k < theta.rows(); ++k) m = std::max(m, theta.row(k).norm());
      return m;
    }
    case NormKind::L2:
    case NormKind::RkhsNorm:
      return theta.norm();
    case NormKind::TwoToInfty: {
      // sup over ||x||_2 <= 1 of ||theta x||_inf = max row L2 norm
      double m = 0.0;
      for (int k = 0; k < theta.rows(); ++k) m = std::max(m, theta.row(k).norm());
      return m;
    }
  }
  throw std::logic_error("comparator_norm: unknown norm kind");
}

}  // namespace sfol
