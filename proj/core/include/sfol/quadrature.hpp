#pragma once

#include <functional>

namespace sfol {

/// Adaptive Gauss-Kronrod (G7-K15, globally refining the worst panel) to an
/// absolute tolerance, stopping early at the roundoff floor or the split
/// budget. Suited to the smooth, light-tailed integrands used here.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_splits = 2000);

/// Fixed-grid composite Simpson rule with n subintervals (n rounded up to
/// even). Deliberately a different integration route from the adaptive rule,
/// so the two can cross-check each other.
double simpson_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Computes ln of the integral of exp(log_f) over [a, b]. The peak of log_f
/// is located on a coarse scan and factored out before integrating, so the
/// integrand may have a very large or very small scale.
double log_integrate_exp(const std::function<double(double)>& log_f, double a, double b,
                         double abs_tol = 1e-10);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace sfol
