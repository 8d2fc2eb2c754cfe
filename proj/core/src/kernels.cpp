#include "sfol/kernels.hpp"

#include <cmath>

namespace sfol {

Kernel Kernel::linear() {
  Kernel k;
  k.kind_ = Kind::LinearDot;
  return k;
}

Kernel Kernel::gaussian_rbf(double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_rbf: width must be positive");
  Kernel k;
  k.kind_ = Kind::GaussianRBF;
  k.width_ = width;
  return k;
}

Kernel Kernel::matern_sobolev(double smoothness, int dim, double length_scale) {
  const double nu = smoothness - 0.5 * dim;
  if (!(nu > 0.0)) {
    throw std::invalid_argument("matern_sobolev: need smoothness > dim/2");
  }
  if (!(length_scale > 0.0)) {
    throw std::invalid_argument("matern_sobolev: length scale must be positive");
  }
  Kernel k;
  k.kind_ = Kind::MaternSobolev;
  k.nu_ = nu;
  k.length_ = length_scale;
  return k;
}

Kernel Kernel::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("Kernel::scaled: factor must be positive");
  Kernel k = *this;
  k.scale_ *= c;
  return k;
}

double Kernel::operator()(const Vector& a, const Vector& b) const {
  switch (kind_) {
    case Kind::LinearDot:
      return scale_ * a.dot(b);
    case Kind::GaussianRBF:
      return scale_ * std::exp(-0.5 * (a - b).squaredNorm() / (width_ * width_));
    case Kind::MaternSobolev: {
      const double r = (a - b).norm();
      if (r < 1e-12 * length_) return scale_;
      const double z = std::sqrt(2.0 * nu_) * r / length_;
      const double v =
          std::exp((1.0 - nu_) * std::log(2.0) - std::lgamma(nu_) + nu_ * std::log(z)) *
          std::cyl_bessel_k(nu_, z);
      return scale_ * v;
    }
  }
  throw std::logic_error("Kernel: unknown kind");
}

Matrix Kernel::gram(const std::vector<Vector>& xs) const {
  const int n = static_cast<int>(xs.size());
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      g(i, j) = (*this)(xs[i], xs[j]);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

}  // namespace sfol
