#pragma once

#include "sfol/types.hpp"

namespace sfol {

/// Positive semidefinite kernel over feature vectors. A kernel may carry a
/// positive scale factor c (k -> c*k); the scale-free learners must be
/// invariant to it.
class Kernel {
 public:
  enum class Kind { LinearDot, GaussianRBF, MaternSobolev };

  static Kernel linear();
  static Kernel gaussian_rbf(double width);
  /// Matern kernel of order nu = smoothness - dim/2, so its native space
  /// matches the Sobolev space W_{smoothness,2} up to norm equivalence.
  static Kernel matern_sobolev(double smoothness, int dim, double length_scale = 1.0);

  double operator()(const Vector& a, const Vector& b) const;
  Matrix gram(const std::vector<Vector>& xs) const;

  Kind kind() const { return kind_; }
  double scale_factor() const { return scale_; }
  Kernel scaled(double c) const;

 private:
  Kind kind_ = Kind::LinearDot;
  double width_ = 1.0;   // RBF
  double nu_ = 0.5;      // Matern order
  double length_ = 1.0;  // Matern length scale
  double scale_ = 1.0;
};

}  // namespace sfol
