#include "fusion/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fusion/nmath.hpp"

namespace fusion {

namespace {

double get_param(const ModelParams& p, ParamId id) {
  switch (id) {
    case ParamId::MuX: return p.mu_x;
    case ParamId::MuY: return p.mu_y;
    case ParamId::Sigma2X: return p.sigma2_x;
    case ParamId::Sigma2Y: return p.sigma2_y;
    case ParamId::Rho: return p.rho;
  }
  throw std::logic_error("get_param: bad ParamId");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

// Type-7 quantile (linear interpolation between order statistics).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double batch_means_mcse(const std::vector<double>& v) {
  const std::size_t len = v.size();
  const auto nb = static_cast<std::size_t>(std::sqrt(static_cast<double>(len)));
  if (nb < 2) {
    const double m = mean_of(v);
    return std::sqrt(variance_of(v, m) / static_cast<double>(len));
  }
  const std::size_t bsize = len / nb;
  std::vector<double> bmeans(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    double s = 0.0;
    for (std::size_t i = k * bsize; i < (k + 1) * bsize; ++i) s += v[i];
    bmeans[k] = s / static_cast<double>(bsize);
  }
  const double m = mean_of(bmeans);
  return std::sqrt(variance_of(bmeans, m) / static_cast<double>(nb));
}

}  // namespace

ChainSummary summarize_states(const std::vector<ModelParams>& states) {
  if (states.empty())
    throw std::invalid_argument("summarize: empty trace");
  ChainSummary out;
  out.length = states.size();
  for (ParamId id : kAllParams) {
    const auto k = static_cast<std::size_t>(id);
    std::vector<double> v(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
      v[i] = get_param(states[i], id);
    ParamSummary& s = out.params[k];
    s.mean = mean_of(v);
    s.sd = std::sqrt(variance_of(v, s.mean));
    s.mcse = batch_means_mcse(v);
    std::sort(v.begin(), v.end());
    s.q025 = quantile_sorted(v, 0.025);
    s.median = quantile_sorted(v, 0.5);
    s.q975 = quantile_sorted(v, 0.975);
  }
  return out;
}

ChainSummary summarize(const ChainTrace& trace) {
  ChainSummary out = summarize_states(trace.states);
  out.acceptance_rates = trace.acceptance_rates;
  return out;
}

ConvergenceReport gelman_rubin(
    const std::vector<std::vector<ModelParams>>& chains, double threshold) {
  if (chains.size() < 2)
    throw std::invalid_argument("gelman_rubin: need at least 2 chains");
  const std::size_t len = chains[0].size();
  for (const auto& c : chains)
    if (c.size() != len)
      throw std::invalid_argument("gelman_rubin: chains have unequal lengths");
  if (len < 10)
    throw std::invalid_argument("gelman_rubin: chains shorter than 10");

  ConvergenceReport rep;
  rep.threshold = threshold;
  const double dlen = static_cast<double>(len);
  bool all_pass = true;
  for (ParamId id : kAllParams) {
    const auto k = static_cast<std::size_t>(id);
    std::vector<double> means(chains.size()), vars(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
      std::vector<double> v(len);
      for (std::size_t i = 0; i < len; ++i) v[i] = get_param(chains[c][i], id);
      means[c] = mean_of(v);
      vars[c] = variance_of(v, means[c]);
    }
    const double w = mean_of(vars);
    const double b_over_len = variance_of(means, mean_of(means));
    double psrf;
    if (w > 0.0) {
      psrf = std::sqrt(((dlen - 1.0) / dlen * w + b_over_len) / w);
    } else {
      psrf = (b_over_len > 0.0) ? std::numeric_limits<double>::infinity()
                                : 1.0;
    }
    rep.psrf[k] = psrf;
    rep.chain_means[k] = means;
    rep.chain_variances[k] = vars;
    all_pass = all_pass && (psrf < threshold);
  }
  rep.pass = all_pass;
  return rep;
}

ConvergenceReport gelman_rubin(const std::vector<ChainTrace>& traces,
                               double threshold) {
  std::vector<std::vector<ModelParams>> chains;
  chains.reserve(traces.size());
  for (const auto& t : traces) chains.push_back(t.states);
  return gelman_rubin(chains, threshold);
}

double trapezoid_area(const DensityCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < curve.xs.size(); ++i)
    area += 0.5 * (curve.ys[i] + curve.ys[i + 1]) *
            (curve.xs[i + 1] - curve.xs[i]);
  return area;
}

double curve_median(const DensityCurve& curve) {
  const double half = 0.5 * trapezoid_area(curve);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < curve.xs.size(); ++i) {
    const double dx = curve.xs[i + 1] - curve.xs[i];
    const double cell = 0.5 * (curve.ys[i] + curve.ys[i + 1]) * dx;
    if (cum + cell >= half) {
      const double frac = (cell > 0.0) ? (half - cum) / cell : 0.5;
      return curve.xs[i] + frac * dx;
    }
    cum += cell;
  }
  return curve.xs.back();
}

DensityCurve histogram(const std::vector<double>& values, std::size_t bins,
                       std::optional<std::pair<double, double>> range) {
  if (values.empty()) throw std::invalid_argument("histogram: no values");
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  double lo, hi;
  if (range) {
    lo = range->first;
    hi = range->second;
    if (!(lo < hi)) throw std::invalid_argument("histogram: bad range");
  } else {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  const double w = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  std::size_t included = 0;
  for (double v : values) {
    if (v < lo || v > hi) continue;  // out-of-range values are dropped
    auto idx = static_cast<std::size_t>((v - lo) / w);
    if (idx >= bins) idx = bins - 1;
    ++counts[idx];
    ++included;
  }
  if (included == 0) throw std::invalid_argument("histogram: empty range");
  DensityCurve c;
  c.kind = CurveKind::Histogram;
  c.xs.resize(bins);
  c.ys.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    c.xs[i] = lo + (static_cast<double>(i) + 0.5) * w;
    c.ys[i] = static_cast<double>(counts[i]) /
              (static_cast<double>(included) * w);
  }
  return c;
}

double fiducial_mu_pdf(double mu, double xbar, double s, std::size_t n) {
  if (n < 2) throw std::domain_error("fiducial mu: n must be >= 2");
  if (!(s > 0.0)) throw std::domain_error("fiducial mu: s must be > 0");
  const double scale = s / std::sqrt(static_cast<double>(n));
  const double df = static_cast<double>(n - 1);
  return std::exp(log_student_t_pdf((mu - xbar) / scale, df)) / scale;
}

double fiducial_sigma2_pdf(double sigma2, double s, std::size_t n) {
  if (n < 2) throw std::domain_error("fiducial sigma: n must be >= 2");
  if (!(s > 0.0)) throw std::domain_error("fiducial sigma: s must be > 0");
  const double nu = static_cast<double>(n - 1);
  return std::exp(log_inv_gamma_pdf(sigma2, 0.5 * nu, 0.5 * nu * s * s));
}

double fiducial_sigma_pdf(double sigma, double s, std::size_t n) {
  if (!(sigma > 0.0)) return 0.0;
  return 2.0 * sigma * fiducial_sigma2_pdf(sigma * sigma, s, n);
}

double confidence_rho_pdf(double rho, double r, std::size_t n) {
  if (n < 4) throw std::domain_error("confidence density: n must be >= 4");
  if (!(std::abs(r) < 1.0))
    throw std::domain_error("confidence density: |r| must be < 1");
  if (!(std::abs(rho) < 1.0)) return 0.0;
  const double sq = std::sqrt(static_cast<double>(n - 3));
  const double z = sq * (std::atanh(r) - std::atanh(rho));
  return sq * std::exp(-0.5 * z * z - 0.5 * kLog2Pi) / (1.0 - rho * rho);
}

double normal_mean_fiducial_pdf(double mu, double xbar, double sigma2,
                                std::size_t n) {
  if (n < 1) throw std::domain_error("normal mean fiducial: n must be >= 1");
  if (!(sigma2 > 0.0))
    throw std::domain_error("normal mean fiducial: sigma2 must be > 0");
  return std::exp(
      log_normal_pdf(mu, xbar, sigma2 / static_cast<double>(n)));
}

namespace {

constexpr double kGridTail = 1e-4;

// Quantile-spaced abscissae, warped toward the ends by a Beta(3,3) CDF. The
// warp shrinks the probability increments near the tails, where the density
// is strongly convex in x and plain mass-uniform cells would overestimate
// the trapezoid area by more than the 1e-3 budget.
template <typename Quantile, typename Pdf>
DensityCurve build_curve(CurveKind kind, std::size_t points, Quantile qf,
                         Pdf pdf) {
  if (points < 8)
    throw std::invalid_argument("density curve: need at least 8 points");
  DensityCurve c;
  c.kind = kind;
  c.xs.resize(points);
  c.ys.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double u =
        static_cast<double>(k) / static_cast<double>(points - 1);
    const double warp = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
    const double p = kGridTail + (1.0 - 2.0 * kGridTail) * warp;
    c.xs[k] = qf(p);
    c.ys[k] = pdf(c.xs[k]);
  }
  for (std::size_t k = 0; k + 1 < points; ++k)
    if (!(c.xs[k] < c.xs[k + 1]))
      throw std::logic_error("density curve: abscissae not increasing");
  const double area = trapezoid_area(c);
  if (std::abs(area - 1.0) > 1e-3)
    throw std::logic_error("density curve: trapezoid area off by > 1e-3");
  return c;
}

}  // namespace

DensityCurve marginal_fiducial_mu(double xbar, double s, std::size_t n,
                                  std::size_t points) {
  if (n < 2) throw std::domain_error("fiducial mu: n must be >= 2");
  const double scale = s / std::sqrt(static_cast<double>(n));
  const double df = static_cast<double>(n - 1);
  return build_curve(
      CurveKind::FiducialMu, points,
      [&](double p) { return xbar + scale * student_t_quantile(p, df); },
      [&](double x) { return fiducial_mu_pdf(x, xbar, s, n); });
}

DensityCurve marginal_fiducial_sigma(double s, std::size_t n,
                                     std::size_t points) {
  if (n < 2) throw std::domain_error("fiducial sigma: n must be >= 2");
  const double nu = static_cast<double>(n - 1);
  return build_curve(
      CurveKind::FiducialSigma, points,
      [&](double p) {
        return std::sqrt(nu * s * s / chi_squared_quantile(1.0 - p, nu));
      },
      [&](double x) { return fiducial_sigma_pdf(x, s, n); });
}

DensityCurve confidence_density_rho(double r, std::size_t n,
                                    std::size_t points) {
  if (n < 4) throw std::domain_error("confidence density: n must be >= 4");
  if (!(std::abs(r) < 1.0))
    throw std::domain_error("confidence density: |r| must be < 1");
  const double zr = std::atanh(r);
  const double sd = 1.0 / std::sqrt(static_cast<double>(n - 3));
  return build_curve(
      CurveKind::ConfidenceRho, points,
      [&](double p) { return std::tanh(zr + sd * normal_quantile(p)); },
      [&](double x) { return confidence_rho_pdf(x, r, n); });
}

DensityCurve normal_mean_fiducial(double xbar, double sigma2, std::size_t n,
                                  std::size_t points) {
  if (n < 1) throw std::domain_error("normal mean fiducial: n must be >= 1");
  if (!(sigma2 > 0.0))
    throw std::domain_error("normal mean fiducial: sigma2 must be > 0");
  const double sd = std::sqrt(sigma2 / static_cast<double>(n));
  return build_curve(
      CurveKind::FiducialMu, points,
      [&](double p) { return xbar + sd * normal_quantile(p); },
      [&](double x) { return normal_mean_fiducial_pdf(x, xbar, sigma2, n); });
}

DensityCurve prior_mu_curve(const PriorSpec& prior, Side side,
                            std::size_t points) {
  const PriorMarginals m = joint_prior_marginals(prior, side);
  return build_curve(
      CurveKind::PriorMu, points,
      [&](double p) {
        return m.mu_location + m.mu_scale * student_t_quantile(p, m.mu_df);
      },
      [&](double x) { return m.pdf_mu(x); });
}

DensityCurve prior_sigma_curve(const PriorSpec& prior, Side side,
                               std::size_t points) {
  const PriorMarginals m = joint_prior_marginals(prior, side);
  return build_curve(
      CurveKind::PriorSigma, points,
      [&](double p) {
        return std::sqrt(inv_gamma_quantile(p, m.s2_shape, m.s2_scale));
      },
      [&](double x) { return m.pdf_sigma(x); });
}

DensityCurve fiducial_rho_curve(double rho_hat, std::size_t n, double alpha,
                                std::size_t points) {
  if (points < 8)
    throw std::invalid_argument("density curve: need at least 8 points");
  const TruncationConfig trunc{alpha};
  const RhoSupport support = rho_support(rho_hat, n, trunc);
  // Uniform grid in gamma; beyond |gamma| ~ 8.5 the normal mass is
  // negligible, so wide truncations are trimmed there.
  const double gspan = std::min(alpha, 8.5);
  DensityCurve c;
  c.kind = CurveKind::FiducialRhoConditional;
  c.xs.resize(points);
  c.ys.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double g = gspan - 2.0 * gspan * static_cast<double>(k) /
                                 static_cast<double>(points - 1);
    c.xs[k] = rho_from_gamma(g, rho_hat, n, support);
    c.ys[k] =
        std::exp(fiducial_logdensity_rho(c.xs[k], rho_hat, n, trunc, support));
  }
  for (std::size_t k = 0; k + 1 < points; ++k)
    if (!(c.xs[k] < c.xs[k + 1]))
      throw std::logic_error("density curve: abscissae not increasing");
  const double area = trapezoid_area(c);
  if (std::abs(area - 1.0) > 1e-3)
    throw std::logic_error("density curve: trapezoid area off by > 1e-3");
  return c;
}

namespace {

std::array<std::array<double, 5>, 5> correlation_matrix(
    const std::vector<ModelParams>& states) {
  std::array<double, 5> mean{};
  for (ParamId id : kAllParams) {
    const auto k = static_cast<std::size_t>(id);
    for (const auto& s : states) mean[k] += get_param(s, id);
    mean[k] /= static_cast<double>(states.size());
  }
  std::array<std::array<double, 5>, 5> cov{};
  for (const auto& s : states)
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = 0; b < 5; ++b)
        cov[a][b] += (get_param(s, static_cast<ParamId>(a)) - mean[a]) *
                     (get_param(s, static_cast<ParamId>(b)) - mean[b]);
  std::array<std::array<double, 5>, 5> corr{};
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      const double denom = std::sqrt(cov[a][a] * cov[b][b]);
      corr[a][b] = (denom > 0.0) ? cov[a][b] / denom : (a == b ? 1.0 : 0.0);
    }
  return corr;
}

}  // namespace

ScanComparison compare_scan_orders(
    const std::vector<std::pair<std::string, std::vector<ModelParams>>>&
        traces) {
  if (traces.size() < 2)
    throw std::invalid_argument("compare_scan_orders: need >= 2 traces");
  std::vector<ChainSummary> sums;
  std::vector<std::array<std::array<double, 5>, 5>> corrs;
  sums.reserve(traces.size());
  for (const auto& [label, states] : traces) {
    sums.push_back(summarize_states(states));
    corrs.push_back(correlation_matrix(states));
  }
  ScanComparison out;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      ScanComparison::Pair pair;
      pair.a = traces[i].first;
      pair.b = traces[j].first;
      for (std::size_t k = 0; k < 5; ++k) {
        const double diff = sums[i].params[k].mean - sums[j].params[k].mean;
        const double pooled = std::sqrt(sums[i].params[k].mcse * sums[i].params[k].mcse +
                                        sums[j].params[k].mcse * sums[j].params[k].mcse);
        pair.mean_diff_z[k] = (diff == 0.0) ? 0.0 : diff / pooled;
        if (std::abs(pair.mean_diff_z[k]) > out.z_threshold) out.flag = true;
      }
      double maxdiff = 0.0;
      for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b)
          maxdiff = std::max(maxdiff,
                             std::abs(corrs[i][a][b] - corrs[j][a][b]));
      pair.max_corr_diff = maxdiff;
      out.pairs.push_back(pair);
    }
  }
  return out;
}

}  // namespace fusion
