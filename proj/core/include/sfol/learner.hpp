#pragma once

#include "sfol/types.hpp"

namespace sfol {

/// Online protocol shared by all learners here: predict(x_t) is called once,
/// then observe(x_t, y_t) with the same features.

/// Emits a probability mass tuple over K classes.
class ProbLearner {
 public:
  virtual ~ProbLearner() = default;
  virtual Vector predict(const Vector& x) = 0;
  virtual void observe(const Vector& x, int y) = 0;
  virtual int num_classes() const = 0;
};

/// Emits a real-valued prediction.
class ScalarLearner {
 public:
  virtual ~ScalarLearner() = default;
  virtual double predict(const Vector& x) = 0;
  virtual void observe(const Vector& x, double y) = 0;
};

}  // namespace sfol
