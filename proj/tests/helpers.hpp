#pragma once

// Independent oracles used by the test suites. Everything here recomputes
// quantities from first principles (per-point densities, brute-force search,
// numeric quadrature) rather than reusing the code paths under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fusion/fiducial.hpp"
#include "fusion/model.hpp"
#include "fusion/nmath.hpp"
#include "fusion/rng.hpp"

namespace testutil {

// Full bivariate normal log density at one point, all constants included.
inline double full_logpdf_point(double x, double y,
                                const fusion::ModelParams& p) {
  const double sx = std::sqrt(p.sigma2_x);
  const double sy = std::sqrt(p.sigma2_y);
  const double om = 1.0 - p.rho * p.rho;
  const double dx = (x - p.mu_x) / sx;
  const double dy = (y - p.mu_y) / sy;
  return -std::log(2.0 * M_PI * sx * sy * std::sqrt(om)) -
         (dx * dx - 2.0 * p.rho * dx * dy + dy * dy) / (2.0 * om);
}

inline double full_loglik(const fusion::ObservationSet& data,
                          const fusion::ModelParams& p) {
  double s = 0.0;
  for (const auto& o : data) s += full_logpdf_point(o.x, o.y, p);
  return s;
}

template <typename F>
double golden_max(F f, double a, double b, double tol = 1e-10) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Brute-force maximiser of the full conditional log likelihood in rho:
// coarse grid over (-0.999, 0.999), then golden section in the best cell.
inline double rho_mle_oracle(const fusion::ObservationSet& data,
                             fusion::ModelParams p) {
  const auto f = [&](double rho) {
    p.rho = rho;
    return full_loglik(data, p);
  };
  const int grid = 400;
  double best_x = 0.0, best_f = -1e300;
  for (int k = 0; k <= grid; ++k) {
    const double rho = -0.999 + 1.998 * k / grid;
    const double v = f(rho);
    if (v > best_f) {
      best_f = v;
      best_x = rho;
    }
  }
  const double step = 1.998 / grid;
  return golden_max(f, std::max(-0.999, best_x - step),
                    std::min(0.999, best_x + step), 1e-10);
}

// Correlated normal pairs via the Cholesky factor.
inline fusion::ObservationSet draw_bvn(std::size_t n,
                                       const fusion::ModelParams& p,
                                       fusion::RandomStream& rng) {
  fusion::ObservationSet data(n);
  const double sx = std::sqrt(p.sigma2_x);
  const double sy = std::sqrt(p.sigma2_y);
  const double mix = std::sqrt(1.0 - p.rho * p.rho);
  for (auto& o : data) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    o.x = p.mu_x + sx * z1;
    o.y = p.mu_y + sy * (p.rho * z1 + mix * z2);
  }
  return data;
}

// One-sample Kolmogorov-Smirnov statistic against a callable CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> draws, Cdf cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double ks_critical_1pct(std::size_t n) {
  return 1.62762 / std::sqrt(static_cast<double>(n));
}

// Cumulative Simpson quadrature of a density over [lo, hi]; evaluation by
// linear interpolation. Serves as the quadrature CDF for KS checks.
struct GridCdf {
  std::vector<double> x;
  std::vector<double> cum;  // normalized to cum.back() == 1

  double operator()(double v) const {
    if (v <= x.front()) return 0.0;
    if (v >= x.back()) return 1.0;
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double frac = (v - x[i]) / (x[i + 1] - x[i]);
    return cum[i] + frac * (cum[i + 1] - cum[i]);
  }
};

// Total mass of the conditional fiducial density by adaptive quadrature.
// The support is cut at pivot-equal points so that a peak that is narrow
// relative to the support (wide truncations) cannot slip between the nodes
// of a single quadrature call.
inline double integrate_fiducial_mass(double rho_hat, std::size_t n,
                                      fusion::TruncationConfig tc,
                                      const fusion::RhoSupport& sup,
                                      double tol = 1e-10) {
  const double gspan = std::min(tc.alpha, 8.5);
  std::vector<double> cuts;
  cuts.push_back(sup.rho_lo);
  for (int k = 0; k <= 24; ++k) {
    const double g = gspan - 2.0 * gspan * k / 24.0;
    const double r = fusion::rho_from_gamma(g, rho_hat, n, sup);
    if (r > cuts.back()) cuts.push_back(r);
  }
  if (sup.rho_hi > cuts.back()) cuts.push_back(sup.rho_hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += fusion::integrate_finite(
        [&](double r) {
          return std::exp(
              fusion::fiducial_logdensity_rho(r, rho_hat, n, tc, sup));
        },
        cuts[i], cuts[i + 1], tol);
  return total;
}

inline GridCdf make_grid_cdf(const std::function<double(double)>& pdf,
                             double lo, double hi, std::size_t cells = 4096) {
  GridCdf g;
  g.x.resize(cells + 1);
  g.cum.assign(cells + 1, 0.0);
  const double h = (hi - lo) / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i)
    g.x[i] = lo + h * static_cast<double>(i);
  double total = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = g.x[i];
    const double b = g.x[i + 1];
    const double mass =
        (b - a) / 6.0 * (pdf(a) + 4.0 * pdf(0.5 * (a + b)) + pdf(b));
    total += mass;
    g.cum[i + 1] = total;
  }
  if (!(total > 0.0)) throw std::runtime_error("grid cdf: zero mass");
  for (double& c : g.cum) c /= total;
  return g;
}

}  // namespace testutil
