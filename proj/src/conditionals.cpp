#include "fusion/conditionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fusion/nmath.hpp"

namespace fusion {

const char* param_name(ParamId id) {
  switch (id) {
    case ParamId::MuX: return "mu_x";
    case ParamId::MuY: return "mu_y";
    case ParamId::Sigma2X: return "sigma2_x";
    case ParamId::Sigma2Y: return "sigma2_y";
    case ParamId::Rho: return "rho";
  }
  throw std::logic_error("param_name: bad ParamId");
}

ParamId param_from_name(std::string_view name) {
  for (ParamId id : kAllParams)
    if (name == param_name(id)) return id;
  throw std::invalid_argument("unknown parameter name: " + std::string(name));
}

namespace {

struct SidePrior {
  double mu_prime, sigma_prime, n_prime;
};

SidePrior side_prior(const PriorSpec& prior, Side side) {
  if (side == Side::X)
    return {prior.mu_prime_x, prior.sigma_prime_x, prior.n_prime_x};
  return {prior.mu_prime_y, prior.sigma_prime_y, prior.n_prime_y};
}

}  // namespace

double beta_scale(const PriorSpec& prior, Side side, double mu) {
  const SidePrior p = side_prior(prior, side);
  const double d = mu - p.mu_prime;
  return 0.5 * (p.n_prime - 1.0) * p.sigma_prime * p.sigma_prime +
         0.5 * p.n_prime * d * d;
}

double log_prior_mu(Side side, double mu, double sigma2,
                    const PriorSpec& prior) {
  if (!(sigma2 > 0.0)) throw std::domain_error("log_prior_mu: sigma2 <= 0");
  const SidePrior p = side_prior(prior, side);
  return log_normal_pdf(mu, p.mu_prime, sigma2 / p.n_prime);
}

double log_prior_sigma2(Side side, double sigma2, double mu,
                        const PriorSpec& prior) {
  if (!(sigma2 > 0.0))
    throw std::domain_error("log_prior_sigma2: sigma2 <= 0");
  const SidePrior p = side_prior(prior, side);
  return log_inv_gamma_pdf(sigma2, 0.5 * p.n_prime,
                           beta_scale(prior, side, mu));
}

double log_full_conditional(ParamId param, double value,
                            const ModelParams& params,
                            const SufficientStats& stats,
                            const PriorSpec& prior) {
  if (param == ParamId::Rho)
    throw std::invalid_argument(
        "log_full_conditional: rho has a fiducial conditional, not a "
        "Bayesian one");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (!std::isfinite(value)) return kNegInf;

  ModelParams p = params;
  double log_prior = 0.0;
  switch (param) {
    case ParamId::MuX:
      p.mu_x = value;
      log_prior = log_prior_mu(Side::X, value, p.sigma2_x, prior);
      break;
    case ParamId::MuY:
      p.mu_y = value;
      log_prior = log_prior_mu(Side::Y, value, p.sigma2_y, prior);
      break;
    case ParamId::Sigma2X:
      if (!(value > 0.0)) return kNegInf;
      p.sigma2_x = value;
      log_prior = log_prior_sigma2(Side::X, value, p.mu_x, prior);
      break;
    case ParamId::Sigma2Y:
      if (!(value > 0.0)) return kNegInf;
      p.sigma2_y = value;
      log_prior = log_prior_sigma2(Side::Y, value, p.mu_y, prior);
      break;
    case ParamId::Rho:
      break;  // unreachable
  }
  return log_prior + log_likelihood(p, stats);
}

double PriorMarginals::log_pdf_mu(double mu) const {
  const double t = (mu - mu_location) / mu_scale;
  return log_student_t_pdf(t, mu_df) - std::log(mu_scale);
}

double PriorMarginals::log_pdf_sigma2(double sigma2) const {
  return log_inv_gamma_pdf(sigma2, s2_shape, s2_scale);
}

double PriorMarginals::pdf_mu(double mu) const {
  return std::exp(log_pdf_mu(mu));
}

double PriorMarginals::pdf_sigma2(double sigma2) const {
  return std::exp(log_pdf_sigma2(sigma2));
}

double PriorMarginals::pdf_sigma(double sigma) const {
  if (!(sigma > 0.0)) return 0.0;
  return 2.0 * sigma * pdf_sigma2(sigma * sigma);
}

PriorMarginals joint_prior_marginals(const PriorSpec& prior, Side side) {
  validate_prior(prior);
  const SidePrior p = side_prior(prior, side);
  const double nu = p.n_prime - 1.0;
  PriorMarginals m;
  m.mu_location = p.mu_prime;
  m.mu_scale = p.sigma_prime / std::sqrt(p.n_prime);
  m.mu_df = nu;
  m.s2_shape = 0.5 * nu;
  m.s2_scale = 0.5 * nu * p.sigma_prime * p.sigma_prime;
  return m;
}

}  // namespace fusion
