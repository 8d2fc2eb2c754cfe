#include "sfol/losses.hpp"

#include <cmath>

namespace sfol {

namespace {

void check_mass(const Vector& p) {
  double sum = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) throw std::invalid_argument("eval_loss: negative probability mass");
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("eval_loss: probability mass does not sum to 1");
  }
}

}  // namespace

double eval_loss(LossKind kind, const Vector& prediction, const Response& response) {
  if (kind == LossKind::Square) {
    const auto& y = std::get<RealResponse>(response).value;
    if (prediction.size() != y.size()) {
      throw std::invalid_argument("eval_loss: dimension mismatch");
    }
    return 0.5 * (prediction - y).squaredNorm();
  }
  // log and logistic: prediction is a mass tuple, response a class index
  check_mass(prediction);
  const int y = std::get<ClassResponse>(response).index;
  if (y < 1 || y > prediction.size()) {
    throw std::invalid_argument("eval_loss: class index out of range");
  }
  const double mass = prediction[y - 1];
  if (mass <= 0.0) return kInfiniteLossSentinel;
  return -std::log(mass);
}

}  // namespace sfol
