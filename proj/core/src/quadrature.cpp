#include "sfol/quadrature.hpp"

#include <algorithm>
#include <vector>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sfol {

namespace {

// G7-K15 nodes and weights on [-1, 1] (positive half; nodes mirror).
constexpr int kNumKronrod = 8;
constexpr double kKronrodNodes[kNumKronrod] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813,
};
constexpr double kKronrodWeights[kNumKronrod] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529,
};
// Gauss-7 weights attach to Kronrod nodes 0, 2, 4, 6.
constexpr double kGaussWeights[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
};

struct PanelResult {
  double kronrod;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk = 0.0, fg = 0.0;
  for (int i = 0; i < kNumKronrod; ++i) {
    const double x = h * kKronrodNodes[i];
    const double v = (i == 0) ? f(c) : f(c - x) + f(c + x);
    fk += kKronrodWeights[i] * v;
    if (i % 2 == 0) fg += kGaussWeights[i / 2] * v;
  }
  return {fk * h, std::abs((fk - fg) * h)};
}

struct Panel {
  double a, b, value, error;
};

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_splits) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    throw std::invalid_argument("adaptive_integrate: bad interval");
  }
  // global error budget: repeatedly bisect the panel with the largest error
  // estimate. Stops at the tolerance, at the roundoff floor of the running
  // value, or at the split budget.
  std::vector<Panel> panels;
  const auto make_panel = [&](double lo, double hi) {
    const PanelResult r = gk15(f, lo, hi);
    return Panel{lo, hi, r.kronrod, r.error};
  };
  panels.push_back(make_panel(a, b));
  for (int split = 0; split < max_splits; ++split) {
    double total_error = 0.0, total_abs = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total_error += panels[i].error;
      total_abs += std::abs(panels[i].value);
      if (panels[i].error > panels[worst].error) worst = i;
    }
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * total_abs;
    if (total_error <= std::max(abs_tol, floor)) break;
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // interval exhausted
    panels[worst] = make_panel(p.a, mid);
    panels.push_back(make_panel(mid, p.b));
  }
  double total = 0.0;
  for (const Panel& p : panels) total += p.value;
  return total;
}

double simpson_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double log_integrate_exp(const std::function<double(double)>& log_f, double a, double b,
                         double abs_tol) {
  // coarse scan for the peak scale
  constexpr int kScan = 257;
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double x = a + (b - a) * i / (kScan - 1);
    peak = std::max(peak, log_f(x));
  }
  if (peak == -std::numeric_limits<double>::infinity()) return peak;
  const auto scaled = [&](double x) { return std::exp(log_f(x) - peak); };
  const double integral = adaptive_integrate(scaled, a, b, abs_tol);
  if (integral <= 0.0) return -std::numeric_limits<double>::infinity();
  return peak + std::log(integral);
}

}  // namespace sfol
