#include "sfol/normal_location.hpp"

#include <cmath>
#include <memory>

#include "sfol/quadrature.hpp"

namespace sfol {

namespace {

void check_model(const NormalLocationModel& m) {
  if (!(m.sigma > 0.0) || m.d < 1 || m.T < 1) {
    throw std::invalid_argument("normal location: need sigma > 0, d >= 1, T >= 1");
  }
}

// e^{-r^2/2} falls below 1e-30 past r = 12
constexpr double kRadialCutoff = 12.0;

// Evaluates ln G_t(S): the ln-expected model gain over the unseen remainder
// of the horizon, given that the first t observations sum to S.
struct NmlCore {
  double sigma;
  double U;
  int T;

  double log_h(double mu) const {
    const double dist = std::max(std::abs(mu) - U, 0.0);
    return T * (mu * mu - dist * dist) / (2.0 * sigma * sigma);
  }

  double log_density_gain(int t, double S) const {
    if (t == T) return log_h(S / T);
    const double m = S / T;
    const double v = sigma * sigma * (T - t) / (static_cast<double>(T) * T);
    const double sd = std::sqrt(v);
    // candidate maxima of the integrand: the Gaussian center, the interior
    // stationary point, and the two boundary-branch stationary points
    const double drift = U * (T - t) / T;
    const double interior = (t > 0) ? m * T / t : 0.0;
    double lo = std::min({m, m - drift, std::clamp(interior, -U, U)}) - 12.0 * sd;
    double hi = std::max({m, m + drift, std::clamp(interior, -U, U)}) + 12.0 * sd;
    const auto log_f = [&](double mu) {
      const double z = mu - m;
      return log_h(mu) - 0.5 * z * z / v - 0.5 * std::log(2.0 * M_PI * v);
    };
    return log_integrate_exp(log_f, lo, hi, 1e-12);
  }
};

}  // namespace

double normal_location_v_term(double U, const NormalLocationModel& model) {
  check_model(model);
  if (!(U > 0.0)) throw std::invalid_argument("normal_location_v_term: U must be positive");
  const double s = std::sqrt(static_cast<double>(model.T)) * U / model.sigma;
  const int dm1 = model.d - 1;
  const auto integrand = [&](double r) {
    return std::pow(1.0 + r / s, dm1) * std::exp(-0.5 * r * r);
  };
  const double integral = adaptive_integrate(integrand, 0.0, kRadialCutoff, 1e-8);
  return std::log1p(model.d / s * integral);
}

double minimax_regret_value(double U, const NormalLocationModel& model) {
  check_model(model);
  if (!(U > 0.0)) throw std::invalid_argument("minimax_regret_value: U must be positive");
  const double d = model.d;
  const double lead =
      0.5 * d *
      std::log(model.T * U * U / (model.sigma * model.sigma) /
               (2.0 * std::exp(2.0 / d * std::lgamma(0.5 * d + 1.0))));
  return lead + normal_location_v_term(U, model);
}

double nml_normalizer_oracle(double U, const NormalLocationModel& model) {
  check_model(model);
  if (model.d > 3) throw std::invalid_argument("nml_normalizer_oracle: d <= 3 only");
  if (!(U > 0.0)) throw std::invalid_argument("nml_normalizer_oracle: U must be positive");
  const double d = model.d;
  const double sigma = model.sigma;
  const double T = model.T;
  const double s = sigma / std::sqrt(T);
  const auto integrand = [&](double r) {
    return std::pow(r * s + U, d - 1.0) * std::exp(-0.5 * r * r);
  };
  const double radial = simpson_integrate(integrand, 0.0, kRadialCutoff, 8192);
  const double bracket = std::pow(U, d) / d + s * radial;
  // angular measure of the unit sphere over the Gaussian normalizer
  return -0.5 * d * std::log(2.0 * M_PI * sigma * sigma / T) + std::log(d) +
         0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0) + std::log(bracket);
}

std::function<double(double)> nml_conditional_predict_1d(const std::vector<double>& history,
                                                         double U,
                                                         const NormalLocationModel& model) {
  check_model(model);
  if (model.d != 1) throw std::invalid_argument("nml_conditional_predict_1d: d = 1 only");
  if (static_cast<int>(history.size()) >= model.T) {
    throw std::invalid_argument("nml_conditional_predict_1d: history exceeds horizon");
  }
  auto core = std::make_shared<NmlCore>(NmlCore{model.sigma, U, model.T});
  const int t = static_cast<int>(history.size()) + 1;
  double S = 0.0;
  for (double y : history) S += y;
  const double log_denom = core->log_density_gain(t - 1, S);
  const double sigma = model.sigma;
  return [core, t, S, log_denom, sigma](double y) {
    const double log_gauss =
        -0.5 * y * y / (sigma * sigma) - 0.5 * std::log(2.0 * M_PI * sigma * sigma);
    return std::exp(log_gauss + core->log_density_gain(t, S + y) - log_denom);
  };
}

double adaptive_normal_bound(double theta_norm, const NormalLocationModel& model) {
  check_model(model);
  const double d = model.d;
  const double ratio = model.T * theta_norm * theta_norm / (model.sigma * model.sigma);
  const double lead =
      0.5 * d *
      std::log((2.0 * ratio + 1.0) / (2.0 * std::exp(2.0 / d * std::lgamma(0.5 * d + 1.0))));
  const double overhead = 2.0 * std::log(std::log2(8.0 * ratio + 4.0));
  // V is decreasing in the radius and the grid never tunes below sigma/sqrt(T)
  const double u_eff = std::max(theta_norm, model.sigma / std::sqrt(model.T));
  return lead + overhead + normal_location_v_term(u_eff, model);
}

AdaptiveNormalPredictor::AdaptiveNormalPredictor(const NormalLocationModel& model, int grid_cap)
    : model_(model) {
  check_model(model);
  if (model.d != 1) throw std::invalid_argument("AdaptiveNormalPredictor: d = 1 only");
  const HyperGrid grid = build_grid(model.sigma * model.sigma / model.T,
                                    std::numeric_limits<double>::infinity(), grid_cap);
  radii_.reserve(grid.values.size());
  for (double alpha : grid.values) radii_.push_back(std::sqrt(alpha));
  aggregator_ = make_logloss_aggregator(grid_log_prior(grid.M));
  NmlCore core{model_.sigma, 0.0, model_.T};
  log_denom_.resize(radii_.size());
  for (std::size_t m = 0; m < radii_.size(); ++m) {
    core.U = radii_[m];
    log_denom_[m] = core.log_density_gain(0, 0.0);
  }
}

double AdaptiveNormalPredictor::predict_density(double y) const {
  const int t = static_cast<int>(history_.size()) + 1;
  if (t > model_.T) throw std::logic_error("AdaptiveNormalPredictor: horizon exhausted");
  const double sigma = model_.sigma;
  const double log_gauss =
      -0.5 * y * y / (sigma * sigma) - 0.5 * std::log(2.0 * M_PI * sigma * sigma);
  NmlCore core{sigma, 0.0, model_.T};
  double density = 0.0;
  for (std::size_t m = 0; m < radii_.size(); ++m) {
    core.U = radii_[m];
    const double p =
        std::exp(log_gauss + core.log_density_gain(t, history_sum_ + y) - log_denom_[m]);
    density += std::exp(aggregator_.log_weights[m]) * p;
  }
  return density;
}

double AdaptiveNormalPredictor::observe(double y) {
  const int t = static_cast<int>(history_.size()) + 1;
  if (t > model_.T) throw std::logic_error("AdaptiveNormalPredictor: horizon exhausted");
  const double sigma = model_.sigma;
  const double log_gauss =
      -0.5 * y * y / (sigma * sigma) - 0.5 * std::log(2.0 * M_PI * sigma * sigma);
  NmlCore core{sigma, 0.0, model_.T};
  std::vector<double> mass(radii_.size());
  std::vector<double> numer(radii_.size());
  for (std::size_t m = 0; m < radii_.size(); ++m) {
    core.U = radii_[m];
    numer[m] = core.log_density_gain(t, history_sum_ + y);
    mass[m] = std::exp(log_gauss + numer[m] - log_denom_[m]);
  }
  auto [mixture_mass, next] = logloss_update(aggregator_, mass);
  aggregator_ = std::move(next);
  log_denom_ = std::move(numer);
  history_.push_back(y);
  history_sum_ += y;
  return -std::log(mixture_mass);
}

}  // namespace sfol
