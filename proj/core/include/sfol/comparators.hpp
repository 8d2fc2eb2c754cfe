#pragma once

#include "sfol/types.hpp"

namespace sfol {

/// argmin over ||theta||_2 <= U of sum of half squared residuals, for scalar
/// real responses. Closed-form normal equations when the solution fits in
/// the ball, otherwise bisection on the ridge multiplier until the norm hits
/// U (relative tolerance 1e-10). Pass U = infinity for the unconstrained
/// least-squares solution.
Comparator best_square_comparator(const std::vector<LabeledExample>& data, double U);

/// Approximate minimizer of the cumulative multiclass logistic loss over the
/// norm ball, by projected gradient descent (2000 iterations, step sized to
/// the curvature of the data). The full K x d matrix is optimized.
Comparator best_logistic_comparator(const std::vector<LabeledExample>& data, double U,
                                    int num_classes, NormKind norm_kind = NormKind::RowMaxOfL2);

/// Cumulative multiclass logistic loss of a fixed weight matrix.
double logistic_objective(const Matrix& theta, const std::vector<LabeledExample>& data);

}  // namespace sfol
