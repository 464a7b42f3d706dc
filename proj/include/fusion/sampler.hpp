#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fusion/conditionals.hpp"
#include "fusion/fiducial.hpp"
#include "fusion/model.hpp"
#include "fusion/rng.hpp"

// Metropolis-within-Gibbs chain over (mu_x, mu_y, sigma2_x, sigma2_y, rho).
// Each transition updates exactly one parameter: the four Bayesian-updated
// parameters move by symmetric random-walk Metropolis (on mu directly, on
// log sigma2 with the Jacobian folded into the acceptance ratio), while rho
// is drawn exactly from its fiducial conditional, independently of the
// previous rho.

namespace fusion {

struct ScanPolicy {
  enum class Kind { UniformRandom, FixedPermutation };
  Kind kind = Kind::UniformRandom;
  std::array<ParamId, 5> order{};  // used by FixedPermutation

  static ScanPolicy uniform();
  // Validates that the order is a true permutation of the five parameters.
  static ScanPolicy fixed(const std::array<ParamId, 5>& order);

  // UniformRandom consumes one uniform, FixedPermutation consumes nothing
  // and cycles with the step index.
  ParamId pick(std::size_t step, RandomStream& rng) const;

  std::string label() const;
};

// "uniform" or a comma-separated permutation such as
// "rho,mu_x,sigma2_x,mu_y,sigma2_y". Throws std::invalid_argument otherwise.
ScanPolicy parse_scan_policy(const std::string& text);

struct TruncPolicy {
  enum class Kind { Auto, Fixed };
  Kind kind = Kind::Auto;
  double value = 0.9;  // safety factor (Auto) or alpha (Fixed)
};

struct SamplerConfig {
  std::size_t iterations = 200000;  // kept transitions after burn-in
  std::size_t burn_in = 5000;
  std::uint64_t seed = 0;
  ScanPolicy scan{};
  double proposal_sd_mu_x = 0.1;
  double proposal_sd_mu_y = 0.1;
  double proposal_sd_logsigma2_x = 0.2;
  double proposal_sd_logsigma2_y = 0.2;
  TruncPolicy trunc{};
  bool adapt_during_burnin = true;
};

struct ChainTrace {
  std::vector<ModelParams> states;  // one entry per kept transition
  SamplerConfig config;
  // Post burn-in acceptance fraction per parameter (rho draws are exact and
  // count as accepted); 0 for parameters never attempted.
  std::array<double, 5> acceptance_rates{};
};

struct UpdateResult {
  ModelParams params;
  bool accepted = false;
};

// One Metropolis step on a non-rho parameter. proposal_sd is the random-walk
// scale on mu, or on log sigma2 for the variance parameters. Consumes one
// normal and one uniform regardless of the outcome.
UpdateResult metropolis_update(ParamId param, const ModelParams& current,
                               const SufficientStats& stats,
                               const PriorSpec& prior, double proposal_sd,
                               RandomStream& rng);

struct RhoUpdateInfo {
  double rho_hat = 0.0;
  double alpha = 0.0;
  RhoSupport support{};
};

// Exact conditional rho draw: recomputes rho_hat from the current means and
// variances, resolves alpha per the truncation policy, samples. Consumes one
// uniform.
ModelParams rho_gibbs_update(const ModelParams& current,
                             const SufficientStats& stats,
                             const TruncPolicy& trunc, RandomStream& rng,
                             RhoUpdateInfo* info = nullptr);

struct ProposalScales {
  double mu_x, mu_y, logsigma2_x, logsigma2_y;
  double& of(ParamId id);
  double of(ParamId id) const;
};

struct TransitionRecord {
  ParamId param = ParamId::MuX;
  bool accepted = false;
};

// One Gibbs transition: pick a parameter per the scan policy, update it.
TransitionRecord gibbs_transition(ModelParams& state,
                                  const SufficientStats& stats,
                                  const PriorSpec& prior,
                                  const ScanPolicy& scan, std::size_t step,
                                  const ProposalScales& scales,
                                  const TruncPolicy& trunc, RandomStream& rng);

// Moment-estimate initial state (sample means/variances, sample correlation
// clamped away from +-1). Always in-domain.
ModelParams moment_init(const ObservationSet& data);

// Burn-in (optionally adapting the proposal scales toward acceptance rates
// in [0.2, 0.5], frozen afterwards) followed by `iterations` recorded
// transitions. Identical (data, prior, init, config) gives a bit-identical
// trace. Throws std::invalid_argument if a conditional is non-finite at init.
ChainTrace run_chain(const ObservationSet& data, const PriorSpec& prior,
                     const ModelParams& init, const SamplerConfig& config);

// Chains i = 0..n_chains-1 run with seed base_seed + i from overdispersed
// starting points: the moment estimates shifted by +-2 rough posterior-scale
// units, with the sign pattern of each side taken from bits 0 and 1 of the
// chain index (means +-2 s/sqrt(n), variances scaled by exp(+-2 sqrt(2/n)),
// atanh(rho) shifted by +-2/sqrt(n-3)).
std::vector<ChainTrace> run_multi_chain(const ObservationSet& data,
                                        const PriorSpec& prior,
                                        const SamplerConfig& config,
                                        std::size_t n_chains,
                                        std::uint64_t base_seed);

}  // namespace fusion
