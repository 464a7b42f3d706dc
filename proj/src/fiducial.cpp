#include "fusion/fiducial.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fusion/nmath.hpp"

namespace fusion {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Numerical guard rails inside (-1, 1). The truncation bound is capped so
// that the induced support stays within +-kRhoEdge; bisection brackets sit
// slightly further out so the cap level is always bracketed.
constexpr double kRhoEdge = 1.0 - 1e-12;
constexpr double kBracketEdge = 1.0 - 1e-13;
constexpr double kAlphaFloor = 1e-8;
constexpr int kScanN = 2048;

double gamma_at(double rho, double zhat, double n) {
  return (zhat - std::atanh(rho)) * std::sqrt(n * (1.0 + rho * rho));
}

// sign(dgamma/drho) = sign(psi); psi does not depend on n.
double psi_at(double rho, double zhat) {
  return (zhat - std::atanh(rho)) * rho -
         (1.0 + rho * rho) / (1.0 - rho * rho);
}

struct ScanTables {
  std::array<double, kScanN> z, rho, curv, sq1r2;
};

const ScanTables& tables() {
  static const ScanTables t = [] {
    ScanTables s;
    const double z_edge = std::atanh(kRhoEdge);
    for (int k = 0; k < kScanN; ++k) {
      const double z = -z_edge + 2.0 * z_edge * k / (kScanN - 1);
      const double r = std::tanh(z);
      s.z[k] = z;
      s.rho[k] = r;
      s.curv[k] = (1.0 + r * r) / (1.0 - r * r);
      s.sq1r2[k] = std::sqrt(1.0 + r * r);
    }
    return s;
  }();
  return t;
}

// Golden-section maximum of psi on [a, b].
std::pair<double, double> psi_local_max(double a, double b, double zhat) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = psi_at(x1, zhat);
  double f2 = psi_at(x2, zhat);
  for (int i = 0; i < 80 && (b - a) > 1e-14; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = psi_at(x2, zhat);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = psi_at(x1, zhat);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, psi_at(xm, zhat)};
}

// Zeros of psi, i.e. critical points of gamma. psi has at most two roots for
// a given sign of rho_hat, but the scan covers the whole grid anyway. A grid
// local maximum of psi just below zero is refined by golden section in case
// a double root hides between two nodes; curvature bounds keep a genuinely
// positive peak from slipping past this test.
std::vector<double> critical_rhos(double zhat) {
  const auto& t = tables();
  std::array<double, kScanN> psi;
  for (int k = 0; k < kScanN; ++k)
    psi[k] = (zhat - t.z[k]) * t.rho[k] - t.curv[k];

  std::vector<double> roots;
  const auto f = [zhat](double r) { return psi_at(r, zhat); };
  for (int k = 1; k < kScanN; ++k) {
    if (psi[k - 1] == 0.0) {
      roots.push_back(t.rho[k - 1]);
    } else if (psi[k - 1] * psi[k] < 0.0) {
      roots.push_back(bisect(f, t.rho[k - 1], t.rho[k], 1e-14));
    }
  }
  for (int k = 1; k + 1 < kScanN; ++k) {
    if (psi[k] < 0.0 && psi[k] > -0.05 && psi[k] > psi[k - 1] &&
        psi[k] >= psi[k + 1]) {
      const auto [rm, pm] = psi_local_max(t.rho[k - 1], t.rho[k + 1], zhat);
      if (pm >= 0.0) {
        if (psi_at(t.rho[k - 1], zhat) < 0.0)
          roots.push_back(bisect(f, t.rho[k - 1], rm, 1e-14));
        if (psi_at(t.rho[k + 1], zhat) < 0.0)
          roots.push_back(bisect(f, rm, t.rho[k + 1], 1e-14));
      }
    }
  }
  return roots;
}

double max_alpha_value(double rho_hat, double n) {
  const double z_edge = std::atanh(kRhoEdge);
  const double zhat = std::atanh(std::clamp(rho_hat, -kRhoEdge, kRhoEdge));
  const double sq_edge = std::sqrt(n * (1.0 + kRhoEdge * kRhoEdge));
  // The cap keeps the support strictly inside the grid guard; the extra
  // backoff keeps safety = 1 from landing exactly on the edge level.
  double alpha = (1.0 - 1e-9) *
                 std::min((zhat + z_edge) * sq_edge, (z_edge - zhat) * sq_edge);
  for (double rc : critical_rhos(zhat)) {
    const double g = std::abs(gamma_at(rc, zhat, n));
    alpha = std::min(alpha, g);
  }
  return std::max(alpha, kAlphaFloor);
}

void warn_near_degenerate(double rho_hat) {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true)) {
    std::fprintf(stderr,
                 "fusion: warning: rho_hat=%g is nearly degenerate; the "
                 "truncation bound is tightened accordingly\n",
                 rho_hat);
  }
}

// Conditional log likelihood kernel in rho only, used for root tie-breaks.
double rho_profile_kernel(double rho, double a, double b, double c,
                          double n) {
  const double om = 1.0 - rho * rho;
  return -0.5 * n * std::log(om) - (b - 2.0 * rho * a + c) / (2.0 * om);
}

}  // namespace

double rho_mle(const ModelParams& params, const SufficientStats& stats) {
  if (stats.n < 2) throw std::invalid_argument("rho_mle: n must be >= 2");
  if (!(params.sigma2_x > 0.0) || !(params.sigma2_y > 0.0))
    throw std::domain_error("rho_mle: variances must be > 0");

  const CenteredSums cs = centered_sums(stats, params.mu_x, params.mu_y);
  const double sx = std::sqrt(params.sigma2_x);
  const double sy = std::sqrt(params.sigma2_y);
  const double a = cs.s_xy / (sx * sy);
  const double b = cs.s_xx / params.sigma2_x;
  const double c = cs.s_yy / params.sigma2_y;
  const double n = static_cast<double>(stats.n);

  const std::vector<double> roots = solve_cubic_real(-n, a, n - b - c, a);
  double best = 0.0;
  double best_kernel = kNegInf;
  bool found = false;
  for (double r : roots) {
    if (!(std::abs(r) < kRhoEdge)) continue;
    const double k = rho_profile_kernel(r, a, b, c, n);
    if (!found || k > best_kernel) {
      best = r;
      best_kernel = k;
      found = true;
    }
  }
  if (!found)
    throw std::domain_error(
        "rho_mle: degenerate data, no correlation root inside (-1, 1)");
  return best;
}

double fisher_info_rho(double rho, std::size_t n) {
  if (!(std::abs(rho) < 1.0))
    throw std::domain_error("fisher_info_rho: |rho| must be < 1");
  const double om = 1.0 - rho * rho;
  return static_cast<double>(n) * (1.0 + rho * rho) / (om * om);
}

double fisher_info_atanh(double rho, std::size_t n) {
  if (!(std::abs(rho) < 1.0))
    throw std::domain_error("fisher_info_atanh: |rho| must be < 1");
  return static_cast<double>(n) * (1.0 + rho * rho);
}

GammaValue gamma_of_rho(double rho, double rho_hat, std::size_t n) {
  if (!(std::abs(rho) < 1.0) || !(std::abs(rho_hat) < 1.0))
    throw std::domain_error("gamma_of_rho: arguments must lie in (-1, 1)");
  const double dn = static_cast<double>(n);
  const double zdiff = std::atanh(rho_hat) - std::atanh(rho);
  const double s = std::sqrt(dn * (1.0 + rho * rho));
  GammaValue g;
  g.gamma = zdiff * s;
  g.dgamma_drho = -s / (1.0 - rho * rho) + zdiff * dn * rho / s;
  return g;
}

TruncationConfig max_alpha(double rho_hat, std::size_t n, double safety) {
  if (!(std::abs(rho_hat) < 1.0))
    throw std::domain_error("max_alpha: |rho_hat| must be < 1");
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("max_alpha: safety must be in (0, 1]");
  if (n < 2) throw std::invalid_argument("max_alpha: n must be >= 2");
  if (std::abs(rho_hat) > 0.9999) warn_near_degenerate(rho_hat);
  const double a = safety * max_alpha_value(rho_hat, static_cast<double>(n));
  return TruncationConfig{std::max(a, kAlphaFloor)};
}

bool check_bijectivity(double rho_hat, std::size_t n, double alpha) {
  if (!(alpha > 0.0) || !(std::abs(rho_hat) < 1.0) || n < 2) return false;
  const auto& t = tables();
  const double zhat = std::atanh(std::clamp(rho_hat, -kRhoEdge, kRhoEdge));
  const double sqn = std::sqrt(static_cast<double>(n));

  int first = -1, last = -1, runs = 0;
  bool prev_in = false, mono_ok = true;
  for (int k = 0; k < kScanN; ++k) {
    const double gamma = (zhat - t.z[k]) * sqn * t.sq1r2[k];
    const bool in = std::abs(gamma) <= alpha;
    if (in) {
      if (!prev_in) {
        ++runs;
        if (runs == 1) first = k;
      }
      last = k;
      const double psi = (zhat - t.z[k]) * t.rho[k] - t.curv[k];
      if (psi > 1e-12) mono_ok = false;
    }
    prev_in = in;
  }
  if (runs > 1) return false;
  if (runs == 0) {
    // Support narrower than one grid cell; the slope at rho_hat decides.
    return psi_at(std::tanh(zhat), zhat) <= 1e-12;
  }
  if (first == 0 || last == kScanN - 1) return false;
  const double dz = t.z[1] - t.z[0];
  if (zhat < t.z[first] - dz || zhat > t.z[last] + dz) return false;
  return mono_ok;
}

RhoSupport rho_support(double rho_hat, std::size_t n, TruncationConfig trunc) {
  if (!(trunc.alpha > 0.0) || !std::isfinite(trunc.alpha))
    throw std::invalid_argument("rho_support: alpha must be positive");
  if (!(std::abs(rho_hat) < 1.0))
    throw std::domain_error("rho_support: |rho_hat| must be < 1");
  if (n < 2) throw std::invalid_argument("rho_support: n must be >= 2");
  const double dn = static_cast<double>(n);
  if (trunc.alpha > max_alpha_value(rho_hat, dn) * (1.0 + 1e-9))
    throw std::invalid_argument(
        "rho_support: bijectivity does not hold at this alpha");

  const double zhat = std::atanh(std::clamp(rho_hat, -kRhoEdge, kRhoEdge));
  const double alpha = trunc.alpha;
  const auto lo_eq = [&](double r) { return gamma_at(r, zhat, dn) - alpha; };
  const auto hi_eq = [&](double r) { return gamma_at(r, zhat, dn) + alpha; };
  RhoSupport s;
  s.rho_lo = bisect(lo_eq, -kBracketEdge, rho_hat, 1e-12, 120);
  s.rho_hi = bisect(hi_eq, rho_hat, kBracketEdge, 1e-12, 120);
  return s;
}

double fiducial_logdensity_rho(double rho, double rho_hat, std::size_t n,
                               TruncationConfig trunc,
                               const RhoSupport& support) {
  if (!(trunc.alpha > 0.0))
    throw std::invalid_argument("fiducial density: alpha must be positive");
  if (rho < support.rho_lo || rho > support.rho_hi) return kNegInf;
  const GammaValue g = gamma_of_rho(rho, rho_hat, n);
  // Mass of the standard normal on [-alpha, alpha] is erf(alpha/sqrt(2)).
  const double mass = std::erf(trunc.alpha * M_SQRT1_2);
  return -0.5 * g.gamma * g.gamma - 0.5 * kLog2Pi - std::log(mass) +
         std::log(std::abs(g.dgamma_drho));
}

double fiducial_logdensity_rho(double rho, double rho_hat, std::size_t n,
                               TruncationConfig trunc) {
  return fiducial_logdensity_rho(rho, rho_hat, n, trunc,
                                 rho_support(rho_hat, n, trunc));
}

double rho_from_gamma(double gamma, double rho_hat, std::size_t n,
                      const RhoSupport& support) {
  const double dn = static_cast<double>(n);
  const double zhat = std::atanh(std::clamp(rho_hat, -kRhoEdge, kRhoEdge));
  const auto eq = [&](double r) { return gamma_at(r, zhat, dn) - gamma; };
  return bisect(eq, support.rho_lo, support.rho_hi, 1e-12, 120);
}

double sample_rho(double rho_hat, std::size_t n, TruncationConfig trunc,
                  const RhoSupport& support, RandomStream& rng) {
  const double u = rng.uniform();
  const double p_lo = normal_cdf(-trunc.alpha);
  const double p_hi = normal_cdf(trunc.alpha);
  const double g = std::clamp(normal_quantile(p_lo + u * (p_hi - p_lo)),
                              -trunc.alpha, trunc.alpha);
  return rho_from_gamma(g, rho_hat, n, support);
}

double sample_rho(double rho_hat, std::size_t n, TruncationConfig trunc,
                  RandomStream& rng) {
  return sample_rho(rho_hat, n, trunc, rho_support(rho_hat, n, trunc), rng);
}

}  // namespace fusion
