#include "sfol/adversaries.hpp"

#include <cmath>

#include "sfol/losses.hpp"
#include "sfol/rng.hpp"

namespace sfol {

namespace {

Vector basis_feature(int coord, int d, double X) {
  Vector x = Vector::Zero(d);
  x[coord] = X;
  return x;
}

double sign_or_one(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

AdversaryStream beta_bernoulli_stream(int T, int d, double U, double X, double Y,
                                      std::uint64_t seed) {
  if (T < 1 || d < 1) throw std::invalid_argument("beta_bernoulli_stream: bad T or d");
  const double ratio = (U * X / Y) * (U * X / Y);
  if (ratio > d) {
    throw std::invalid_argument("beta_bernoulli_stream: regime requires (UX/Y)^2 <= d");
  }
  AdversaryStream s;
  s.kind = AdversaryStream::Kind::BetaBernoulli;
  s.T = T;
  s.d = d;
  s.U = U;
  s.X = X;
  s.Y = Y;
  s.seed = seed;

  const int T_block = T / d;
  const double U_coord = U / (2.0 * Y * std::sqrt(static_cast<double>(d)));
  s.A = std::log(2.0 * T_block) / (U_coord * U_coord);

  Rng rng(seed);
  s.p.resize(d);
  for (int i = 0; i < d; ++i) s.p[i] = rng.beta(s.A, s.A);

  s.rounds.reserve(T);
  for (int t = 1; t <= T; ++t) {
    const int coord = (t - 1) % d;
    const int z = rng.bernoulli(s.p[coord]) ? 1 : 0;
    LabeledExample ex;
    ex.features = basis_feature(coord, d, X);
    ex.response = RealResponse{Vector::Constant(1, (2.0 * z - 1.0) * Y)};
    s.rounds.push_back(std::move(ex));
  }
  return s;
}

double bayes_optimal_action(const std::vector<int>& history, double A) {
  if (!(A > 0.0)) throw std::invalid_argument("bayes_optimal_action: A must be positive");
  double ones = 0.0;
  for (int z : history) ones += (z != 0) ? 1.0 : 0.0;
  return (ones + A) / (static_cast<double>(history.size()) + 2.0 * A);
}

AdversaryStream rademacher_stream(int T, int d, double X, double Y, std::uint64_t seed) {
  if (T < 1 || d < 1) throw std::invalid_argument("rademacher_stream: bad T or d");
  AdversaryStream s;
  s.kind = AdversaryStream::Kind::Rademacher;
  s.T = T;
  s.d = d;
  s.X = X;
  s.Y = Y;
  s.seed = seed;
  Rng rng(seed);
  s.rounds.reserve(T);
  for (int t = 1; t <= T; ++t) {
    LabeledExample ex;
    ex.features = basis_feature((t - 1) % d, d, X);
    ex.response = RealResponse{Vector::Constant(1, rng.bernoulli(0.5) ? Y : -Y)};
    s.rounds.push_back(std::move(ex));
  }
  return s;
}

SignFlipResult sign_flip_run(ScalarLearner& learner, int T, int d, double U, double X,
                             double Y) {
  if (T > d) throw std::invalid_argument("sign_flip_run: requires T <= d");
  SignFlipResult result;
  Vector theta = Vector::Zero(d);
  const double coord_mag = U / std::sqrt(static_cast<double>(T));
  for (int t = 1; t <= T; ++t) {
    const Vector x = basis_feature(t - 1, d, X);
    const double a = learner.predict(x);
    const double y = -Y * sign_or_one(a);
    // comparator coordinate points at the response it will be scored on
    theta[t - 1] = coord_mag * sign_or_one(y);
    learner.observe(x, y);
    result.ledger.record(square_loss(a, y), square_loss(theta[t - 1] * X, y));
  }
  result.regret = result.ledger.cum_regret();
  result.comparator.theta = theta.transpose();
  result.comparator.norm_kind = NormKind::L2;
  result.comparator.norm_value = theta.norm();
  return result;
}

LowerBoundValue lower_bound_value(LowerBoundKind kind, const LowerBoundParams& p) {
  LowerBoundValue out;
  switch (kind) {
    case LowerBoundKind::Prop19Finite: {
      const int block = static_cast<int>(p.T / p.d);
      if ((p.U * p.X / p.Y) * (p.U * p.X / p.Y) > p.d) {
        out.in_regime = false;
        out.note = "requires (UX/Y)^2 <= d";
      }
      const double r = p.U * p.X / (2.0 * p.Y);
      out.value = 0.36 * p.d * p.Y * p.Y *
                      std::log(block * r * r / (2.0 * p.d * std::log(2.0 * block)) + 1.0) -
                  4.0 * p.d * p.Y * p.Y;
      return out;
    }
    case LowerBoundKind::Prop19TDep: {
      // unit-interval normalization: responses in [0,1], comparators within
      // U of 1/2
      if (p.U > 0.5) {
        out.in_regime = false;
        out.note = "normalized form requires U <= 1/2";
      }
      out.value =
          0.09 * std::log(p.T * p.U * p.U / (2.0 * std::log(2.0 * p.T)) + 1.0) - 1.0;
      return out;
    }
    case LowerBoundKind::Prop20: {
      const double cap = p.d / 8.0 * (p.Y / (p.U * p.X)) * (p.Y / (p.U * p.X));
      if (!(p.d <= p.T && p.T <= cap)) {
        out.in_regime = false;
        out.note = "requires d <= T <= (d/8)(Y/(UX))^2";
      }
      out.value = std::sqrt(2.0) / 8.0 * std::min(p.U * p.X, p.Y) * p.Y * std::sqrt(p.T);
      return out;
    }
    case LowerBoundKind::Prop21: {
      if (p.T > p.d) {
        out.in_regime = false;
        out.note = "requires T <= d";
      }
      out.value = 0.5 * std::min(p.U * p.X, p.Y) * p.Y * std::sqrt(p.T);
      return out;
    }
    case LowerBoundKind::Thm14Asym: {
      if ((p.U * p.X / p.Y) * (p.U * p.X / p.Y) > p.d) {
        out.in_regime = false;
        out.note = "requires d (Y/(UX))^2 >= 1; asymptotic in T";
      }
      out.value = 0.5 * p.d * p.Y * p.Y *
                  std::log(p.T * p.U * p.U * p.X * p.X / (p.d * p.d * p.Y * p.Y));
      return out;
    }
  }
  throw std::logic_error("lower_bound_value: unknown kind");
}

}  // namespace sfol
