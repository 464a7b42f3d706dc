#pragma once

#include <cstddef>

#include "fusion/model.hpp"
#include "fusion/rng.hpp"

// Fiducial machinery for the correlation parameter. The conditional MLE
// rho_hat (all other parameters known) solves the cubic
//
//   -n r^3 + A r^2 + (n - B - C) r + A = 0,
//   A = s_xy/(sx sy), B = s_xx/sx^2, C = s_yy/sy^2,
//
// which is the score numerator of the full conditional log likelihood in rho.
// The pivot equation links rho_hat and rho through a standard normal Gamma:
//
//   atanh(rho_hat) = atanh(rho) + Gamma / sqrt(n (1 + rho^2)),
//
// i.e. gamma(rho) = (atanh(rho_hat) - atanh(rho)) sqrt(n (1 + rho^2)), with
// sqrt(n(1+rho^2)) the square root of the Fisher information of atanh(rho).
// Truncating Gamma to [-alpha, alpha] and inverting the equation yields the
// conditional density  psi_alpha(gamma(rho)) |dgamma/drho|  on the induced
// interval [rho_lo, rho_hi], and exact sampling by inverse CDF in gamma
// followed by root finding in rho. All of this requires gamma to be strictly
// monotone over the induced interval ("bijectivity").

namespace fusion {

struct TruncationConfig {
  double alpha = 1.0;  // > 0
};

struct RhoSupport {
  double rho_lo = -1.0;
  double rho_hi = 1.0;
};

struct GammaValue {
  double gamma = 0.0;
  double dgamma_drho = 0.0;
};

// Conditional MLE of rho at the given means/variances. Roots of the cubic in
// (-1, 1) are found in closed form, Newton-polished, and ties are broken by
// the full conditional log likelihood in rho. Throws std::domain_error when
// no admissible root exists (degenerate data).
double rho_mle(const ModelParams& params, const SufficientStats& stats);

// n (1 + rho^2) / (1 - rho^2)^2.
double fisher_info_rho(double rho, std::size_t n);
// n (1 + rho^2); equals fisher_info_rho * (1 - rho^2)^2.
double fisher_info_atanh(double rho, std::size_t n);

// gamma and its analytic derivative
//   dgamma/drho = -sqrt(n(1+rho^2))/(1-rho^2)
//                 + (atanh(rho_hat) - atanh(rho)) n rho / sqrt(n(1+rho^2)).
GammaValue gamma_of_rho(double rho, double rho_hat, std::size_t n);

// Largest alpha for which gamma is strictly monotone over the interval it
// induces, times the safety factor. Monotonicity can only break where
// dgamma/drho vanishes; those critical points solve the n-free equation
//   (atanh(rho_hat) - atanh(rho)) rho = (1+rho^2)/(1-rho^2),
// so the limit is the smallest |gamma| over the critical points, capped by
// the gamma level at which the support would reach the numerical edge of
// (-1, 1). |rho_hat| > 0.9999 triggers a one-time stderr warning; the
// tangency cap already shrinks alpha there.
TruncationConfig max_alpha(double rho_hat, std::size_t n, double safety = 0.9);

// Fine-grid verification that {|gamma| <= alpha} is a single interval
// containing rho_hat on which gamma is strictly decreasing. max_alpha
// guarantees this passes at the alpha it returns.
bool check_bijectivity(double rho_hat, std::size_t n, double alpha);

// Endpoints of the induced interval: gamma(rho_lo) = +alpha and
// gamma(rho_hi) = -alpha, each solved by bisection to 1e-12. Throws
// std::invalid_argument if bijectivity fails at this alpha.
RhoSupport rho_support(double rho_hat, std::size_t n, TruncationConfig trunc);

// Log of the conditional fiducial density: log psi_alpha(gamma(rho)) +
// log|dgamma/drho| inside [rho_lo, rho_hi], -inf outside. psi_alpha is the
// standard normal density renormalised to [-alpha, alpha]. The second
// overload reuses a precomputed support (hot paths, quadrature loops).
double fiducial_logdensity_rho(double rho, double rho_hat, std::size_t n,
                               TruncationConfig trunc);
double fiducial_logdensity_rho(double rho, double rho_hat, std::size_t n,
                               TruncationConfig trunc,
                               const RhoSupport& support);

// Unique rho in the support with gamma(rho) = gamma, by bisection to 1e-12.
double rho_from_gamma(double gamma, double rho_hat, std::size_t n,
                      const RhoSupport& support);

// Exact draw: Gamma from the truncated standard normal by inverse CDF, then
// rho_from_gamma. Consumes exactly one uniform from the stream.
double sample_rho(double rho_hat, std::size_t n, TruncationConfig trunc,
                  RandomStream& rng);
double sample_rho(double rho_hat, std::size_t n, TruncationConfig trunc,
                  const RhoSupport& support, RandomStream& rng);

}  // namespace fusion
