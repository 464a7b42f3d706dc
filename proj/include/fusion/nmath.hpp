#pragma once

#include <cstddef>
#include <functional>
#include <vector>

// Scalar math utilities shared by the model, conditional and fiducial layers.
// Distribution functions delegate to Boost.Math; everything is in log space
// where underflow is a concern.

namespace fusion {

inline constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal_pdf(double x, double mean, double variance);
double normal_cdf(double z);
double normal_quantile(double p);  // p in (0, 1)

double log_student_t_pdf(double t, double df);
double student_t_cdf(double t, double df);
double student_t_quantile(double p, double df);

double chi_squared_quantile(double p, double df);

// Inverse gamma in the shape/scale parametrisation: x^-(a+1) exp(-b/x).
double log_inv_gamma_pdf(double x, double shape, double scale);
double inv_gamma_cdf(double x, double shape, double scale);
double inv_gamma_quantile(double p, double shape, double scale);

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0, Newton-polished. Degenerate
// leading coefficients fall through to the quadratic/linear cases.
std::vector<double> solve_cubic_real(double c3, double c2, double c1, double c0);

// Root of f on [lo, hi] assuming a sign change; plain bisection to the given
// absolute tolerance in x. Throws std::runtime_error if the bracket is bad.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter = 200);

// Adaptive Gauss-Kronrod on a finite interval.
double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10);
// exp-sinh quadrature over (0, inf).
double integrate_positive_axis(const std::function<double(double)>& f,
                               double tol = 1e-10);

}  // namespace fusion
