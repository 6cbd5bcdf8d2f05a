#pragma once

namespace circmc {

/// Wichura's AS241 (PPND16); relative accuracy about 1e-16 on (0,1).
double inverse_normal_cdf(double p);

double normal_cdf(double x);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Gamma(shape, rate 1) quantile by a fixed 64-step bisection. The step
/// count never depends on the answer, so replaying the same u on two chains
/// costs the same and yields bit-identical output.
double gamma_quantile_bisect(double shape, double u);

/// Gamma(shape, rate 1) quantile, bisected to relative width `rel_tol`.
double gamma_quantile(double shape, double p, double rel_tol = 1e-12);

}  // namespace circmc
