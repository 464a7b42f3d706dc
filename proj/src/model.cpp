#include "fusion/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fusion/nmath.hpp"
#include "fusion/rng.hpp"

namespace fusion {

void validate_observations(const ObservationSet& data) {
  if (data.size() < 2)
    throw std::invalid_argument("observations: need at least 2 points");
  for (const auto& p : data)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("observations: non-finite value");
}

void validate_params(const ModelParams& p) {
  if (!std::isfinite(p.mu_x) || !std::isfinite(p.mu_y))
    throw std::domain_error("params: non-finite mean");
  if (!(p.sigma2_x > 0.0) || !(p.sigma2_y > 0.0))
    throw std::domain_error("params: variance must be > 0");
  if (!(std::abs(p.rho) < 1.0))
    throw std::domain_error("params: |rho| must be < 1");
}

void validate_prior(const PriorSpec& prior) {
  const auto fail = [](const std::string& key, const std::string& what) {
    throw std::invalid_argument("prior." + key + ": " + what);
  };
  if (!std::isfinite(prior.mu_prime_x)) fail("mu_x", "must be finite");
  if (!std::isfinite(prior.mu_prime_y)) fail("mu_y", "must be finite");
  if (!(prior.sigma_prime_x > 0.0)) fail("sd_x", "must be > 0");
  if (!(prior.sigma_prime_y > 0.0)) fail("sd_y", "must be > 0");
  if (!(prior.n_prime_x >= 2.0)) fail("n_x", "must be >= 2");
  if (!(prior.n_prime_y >= 2.0)) fail("n_y", "must be >= 2");
}

void validate_stats(const SufficientStats& s) {
  if (s.n < 2) throw std::invalid_argument("stats: n must be >= 2");
  const double n = static_cast<double>(s.n);
  const double slack =
      1e-9 * (1.0 + std::abs(s.sum_xx) * n + std::abs(s.sum_yy) * n);
  if (s.sum_xx * n < s.sum_x * s.sum_x - slack ||
      s.sum_yy * n < s.sum_y * s.sum_y - slack)
    throw std::invalid_argument("stats: Cauchy-Schwarz violated");
}

SufficientStats compute_sufficient_stats(const ObservationSet& data) {
  validate_observations(data);
  SufficientStats s;
  s.n = data.size();
  for (const auto& p : data) {
    s.sum_x += p.x;
    s.sum_y += p.y;
    s.sum_xx += p.x * p.x;
    s.sum_yy += p.y * p.y;
    s.sum_xy += p.x * p.y;
  }
  return s;
}

CenteredSums centered_sums(const SufficientStats& s, double mu_x,
                           double mu_y) {
  const double n = static_cast<double>(s.n);
  CenteredSums c;
  c.s_xx = s.sum_xx - 2.0 * mu_x * s.sum_x + n * mu_x * mu_x;
  c.s_yy = s.sum_yy - 2.0 * mu_y * s.sum_y + n * mu_y * mu_y;
  c.s_xy = s.sum_xy - mu_x * s.sum_y - mu_y * s.sum_x + n * mu_x * mu_y;
  return c;
}

double log_likelihood(const ModelParams& p, const SufficientStats& s) {
  validate_params(p);
  const CenteredSums c = centered_sums(s, p.mu_x, p.mu_y);
  const double sx = std::sqrt(p.sigma2_x);
  const double sy = std::sqrt(p.sigma2_y);
  const double om = 1.0 - p.rho * p.rho;
  return -static_cast<double>(s.n) * std::log(sx * sy) -
         c.s_xx / (2.0 * om * p.sigma2_x) +
         p.rho * c.s_xy / (om * sx * sy) -
         c.s_yy / (2.0 * om * p.sigma2_y);
}

ObservationSet synthesize_matching_dataset(std::size_t n, double mean_x,
                                           double sd_x, double mean_y,
                                           double sd_y, double corr,
                                           std::uint64_t seed) {
  if (n < 3)
    throw std::invalid_argument("synthesize: n must be >= 3");
  if (!(sd_x > 0.0) || !(sd_y > 0.0))
    throw std::invalid_argument("synthesize: standard deviations must be > 0");
  if (!(std::abs(corr) < 1.0))
    throw std::invalid_argument("synthesize: |corr| must be < 1");
  if (!std::isfinite(mean_x) || !std::isfinite(mean_y))
    throw std::invalid_argument("synthesize: non-finite target mean");

  RandomStream rng(seed);
  const double nm1 = static_cast<double>(n - 1);
  std::vector<double> u(n), v(n);
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) u[i] = rng.normal();
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();

    double mu = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += u[i];
    for (std::size_t i = 0; i < n; ++i) mv += v[i];
    mu /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) u[i] -= mu;
    for (std::size_t i = 0; i < n; ++i) v[i] -= mv;

    double uu = 0.0;
    for (std::size_t i = 0; i < n; ++i) uu += u[i] * u[i];
    if (uu < 1e-12) continue;  // degenerate draw, retry
    const double su = std::sqrt(uu / nm1);
    for (std::size_t i = 0; i < n; ++i) u[i] /= su;

    double uv = 0.0;
    for (std::size_t i = 0; i < n; ++i) uv += u[i] * v[i];
    for (std::size_t i = 0; i < n; ++i) v[i] -= (uv / nm1) * u[i];
    double vv = 0.0;
    for (std::size_t i = 0; i < n; ++i) vv += v[i] * v[i];
    if (vv < 1e-12) continue;
    const double sv = std::sqrt(vv / nm1);
    for (std::size_t i = 0; i < n; ++i) v[i] /= sv;

    // u and v now have mean 0, sample sd 1, and are exactly orthogonal, so
    // the blend below has sample sd 1 and sample correlation `corr` with u.
    const double mix = std::sqrt(1.0 - corr * corr);
    ObservationSet out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i].x = mean_x + sd_x * u[i];
      out[i].y = mean_y + sd_y * (corr * u[i] + mix * v[i]);
    }
    return out;
  }
  throw std::runtime_error("synthesize: degenerate base sample");
}

SampleMoments sample_moments(const ObservationSet& data) {
  validate_observations(data);
  const SufficientStats s = compute_sufficient_stats(data);
  const double n = static_cast<double>(s.n);
  SampleMoments m;
  m.mean_x = s.sum_x / n;
  m.mean_y = s.sum_y / n;
  const CenteredSums c = centered_sums(s, m.mean_x, m.mean_y);
  m.sd_x = std::sqrt(c.s_xx / (n - 1.0));
  m.sd_y = std::sqrt(c.s_yy / (n - 1.0));
  const double denom = std::sqrt(c.s_xx * c.s_yy);
  m.corr = (denom > 0.0) ? c.s_xy / denom : 0.0;
  return m;
}

}  // namespace fusion
