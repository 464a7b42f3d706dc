#include "fusion/nmath.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fusion/rng.hpp"

namespace fusion {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
}

double log_normal_pdf(double x, double mean, double variance) {
  if (!(variance > 0.0)) throw std::domain_error("normal pdf: variance <= 0");
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance)) - d * d / (2.0 * variance);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal quantile: p outside (0, 1)");
  return boost::math::quantile(kStdNormal, p);
}

double RandomStream::normal() { return normal_quantile(uniform()); }

double log_student_t_pdf(double t, double df) {
  if (!(df > 0.0)) throw std::domain_error("student t: df <= 0");
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * M_PI) -
         0.5 * (df + 1.0) * std::log1p(t * t / df);
}

double student_t_cdf(double t, double df) {
  return boost::math::cdf(boost::math::students_t_distribution<double>(df), t);
}

double student_t_quantile(double p, double df) {
  return boost::math::quantile(
      boost::math::students_t_distribution<double>(df), p);
}

double chi_squared_quantile(double p, double df) {
  return boost::math::quantile(
      boost::math::chi_squared_distribution<double>(df), p);
}

double log_inv_gamma_pdf(double x, double shape, double scale) {
  if (!(shape > 0.0 && scale > 0.0))
    throw std::domain_error("inverse gamma: nonpositive shape or scale");
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(scale) - std::lgamma(shape) -
         (shape + 1.0) * std::log(x) - scale / x;
}

double inv_gamma_cdf(double x, double shape, double scale) {
  if (!(x > 0.0)) return 0.0;
  // X ~ InvGamma(a, b)  <=>  P(X <= x) = Q(a, b/x).
  return boost::math::gamma_q(shape, scale / x);
}

double inv_gamma_quantile(double p, double shape, double scale) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse gamma quantile: p outside (0, 1)");
  return scale / boost::math::gamma_q_inv(shape, p);
}

namespace {

// One guarded Newton step toward a root of the original cubic.
double polish_root(double x, double c3, double c2, double c1, double c0) {
  for (int i = 0; i < 3; ++i) {
    const double f = ((c3 * x + c2) * x + c1) * x + c0;
    const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    if (df == 0.0) break;
    const double step = f / df;
    if (!std::isfinite(step)) break;
    x -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace

std::vector<double> solve_cubic_real(double c3, double c2, double c1,
                                     double c0) {
  std::vector<double> roots;
  if (c3 == 0.0) {
    if (c2 == 0.0) {
      if (c1 != 0.0) roots.push_back(-c0 / c1);
      return roots;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      roots.push_back((-c1 + sq) / (2.0 * c2));
      roots.push_back((-c1 - sq) / (2.0 * c2));
    }
    return roots;
  }

  const double a = c2 / c3;
  const double b = c1 / c3;
  const double c = c0 / c3;
  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
  const double q3 = q * q * q;

  if (r * r < q3) {
    // Three real roots (trigonometric form).
    const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(q);
    roots.push_back(m * std::cos(theta / 3.0) - a / 3.0);
    roots.push_back(m * std::cos((theta + 2.0 * M_PI) / 3.0) - a / 3.0);
    roots.push_back(m * std::cos((theta - 2.0 * M_PI) / 3.0) - a / 3.0);
  } else {
    const double s = -std::copysign(
        std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
    const double t = (s == 0.0) ? 0.0 : q / s;
    roots.push_back(s + t - a / 3.0);
  }
  for (double& x : roots) x = polish_root(x, c3, c2, c1, c0);
  std::sort(roots.begin(), roots.end());
  return roots;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    // Tolerate a bracket endpoint that sits numerically on the root.
    const double scale = std::max(std::abs(flo), std::abs(fhi));
    if (std::abs(flo) <= 1e-9 * scale) return lo;
    if (std::abs(fhi) <= 1e-9 * scale) return hi;
    throw std::runtime_error("bisect: endpoints do not bracket a root");
  }
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (flo * fmid < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 15, tol, &err);
}

double integrate_positive_axis(const std::function<double(double)>& f,
                               double tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  return integrator.integrate(f, tol, &err, &l1);
}

}  // namespace fusion
