#include "fusion/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fusion {

ScanPolicy ScanPolicy::uniform() { return ScanPolicy{}; }

ScanPolicy ScanPolicy::fixed(const std::array<ParamId, 5>& order) {
  std::array<int, 5> seen{};
  for (ParamId id : order) ++seen[static_cast<std::size_t>(id)];
  for (int c : seen)
    if (c != 1)
      throw std::invalid_argument(
          "scan order must visit each of the five parameters exactly once");
  ScanPolicy s;
  s.kind = Kind::FixedPermutation;
  s.order = order;
  return s;
}

ParamId ScanPolicy::pick(std::size_t step, RandomStream& rng) const {
  if (kind == Kind::UniformRandom) {
    int idx = static_cast<int>(rng.uniform() * 5.0);
    if (idx > 4) idx = 4;
    return static_cast<ParamId>(idx);
  }
  return order[step % 5];
}

std::string ScanPolicy::label() const {
  if (kind == Kind::UniformRandom) return "uniform";
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ',';
    out += param_name(order[i]);
  }
  return out;
}

ScanPolicy parse_scan_policy(const std::string& text) {
  if (text == "uniform") return ScanPolicy::uniform();
  std::array<ParamId, 5> order{};
  std::stringstream ss(text);
  std::string token;
  std::size_t i = 0;
  while (std::getline(ss, token, ',')) {
    if (i >= 5)
      throw std::invalid_argument("scan order has more than five entries: " +
                                  text);
    order[i++] = param_from_name(token);
  }
  if (i != 5)
    throw std::invalid_argument("scan order must list five parameters: " +
                                text);
  return ScanPolicy::fixed(order);
}

double& ProposalScales::of(ParamId id) {
  switch (id) {
    case ParamId::MuX: return mu_x;
    case ParamId::MuY: return mu_y;
    case ParamId::Sigma2X: return logsigma2_x;
    case ParamId::Sigma2Y: return logsigma2_y;
    case ParamId::Rho: break;
  }
  throw std::logic_error("ProposalScales: rho has no proposal scale");
}

double ProposalScales::of(ParamId id) const {
  return const_cast<ProposalScales*>(this)->of(id);
}

UpdateResult metropolis_update(ParamId param, const ModelParams& current,
                               const SufficientStats& stats,
                               const PriorSpec& prior, double proposal_sd,
                               RandomStream& rng) {
  if (param == ParamId::Rho)
    throw std::invalid_argument(
        "metropolis_update: rho is updated by its fiducial conditional");
  if (!(proposal_sd >= 0.0) || !std::isfinite(proposal_sd))
    throw std::invalid_argument("metropolis_update: bad proposal scale");

  // Fixed consumption pattern: one normal, one uniform per call.
  const double step = proposal_sd * rng.normal();
  const double u = rng.uniform();

  const bool is_mu = (param == ParamId::MuX || param == ParamId::MuY);
  double log_ratio;
  double proposed;
  if (is_mu) {
    const double cur = (param == ParamId::MuX) ? current.mu_x : current.mu_y;
    proposed = cur + step;
    log_ratio = log_full_conditional(param, proposed, current, stats, prior) -
                log_full_conditional(param, cur, current, stats, prior);
  } else {
    // Random walk on log sigma2; the Jacobian term keeps the sigma2 density
    // as the target.
    const double cur =
        (param == ParamId::Sigma2X) ? current.sigma2_x : current.sigma2_y;
    proposed = cur * std::exp(step);
    log_ratio = log_full_conditional(param, proposed, current, stats, prior) -
                log_full_conditional(param, cur, current, stats, prior) +
                std::log(proposed) - std::log(cur);
  }

  bool accepted = !std::isnan(log_ratio) &&
                  (log_ratio >= 0.0 || std::log(u) < log_ratio);
  UpdateResult res{current, accepted};
  if (accepted) {
    switch (param) {
      case ParamId::MuX: res.params.mu_x = proposed; break;
      case ParamId::MuY: res.params.mu_y = proposed; break;
      case ParamId::Sigma2X: res.params.sigma2_x = proposed; break;
      case ParamId::Sigma2Y: res.params.sigma2_y = proposed; break;
      case ParamId::Rho: break;
    }
  }
  return res;
}

ModelParams rho_gibbs_update(const ModelParams& current,
                             const SufficientStats& stats,
                             const TruncPolicy& trunc, RandomStream& rng,
                             RhoUpdateInfo* info) {
  const double rho_hat = rho_mle(current, stats);
  const TruncationConfig tc = (trunc.kind == TruncPolicy::Kind::Auto)
                                  ? max_alpha(rho_hat, stats.n, trunc.value)
                                  : TruncationConfig{trunc.value};
  const RhoSupport support = rho_support(rho_hat, stats.n, tc);
  ModelParams out = current;
  out.rho = sample_rho(rho_hat, stats.n, tc, support, rng);
  if (info) {
    info->rho_hat = rho_hat;
    info->alpha = tc.alpha;
    info->support = support;
  }
  return out;
}

TransitionRecord gibbs_transition(ModelParams& state,
                                  const SufficientStats& stats,
                                  const PriorSpec& prior,
                                  const ScanPolicy& scan, std::size_t step,
                                  const ProposalScales& scales,
                                  const TruncPolicy& trunc,
                                  RandomStream& rng) {
  const ParamId id = scan.pick(step, rng);
  TransitionRecord rec{id, false};
  if (id == ParamId::Rho) {
    state = rho_gibbs_update(state, stats, trunc, rng);
    rec.accepted = true;  // exact conditional draw
  } else {
    const UpdateResult res =
        metropolis_update(id, state, stats, prior, scales.of(id), rng);
    state = res.params;
    rec.accepted = res.accepted;
  }
  return rec;
}

ModelParams moment_init(const ObservationSet& data) {
  const SampleMoments m = sample_moments(data);
  ModelParams p;
  p.mu_x = m.mean_x;
  p.mu_y = m.mean_y;
  p.sigma2_x = std::max(m.sd_x * m.sd_x, 1e-12);
  p.sigma2_y = std::max(m.sd_y * m.sd_y, 1e-12);
  p.rho = std::clamp(m.corr, -0.999, 0.999);
  return p;
}

namespace {

ModelParams dispersed_init(const SampleMoments& m, std::size_t n,
                           std::size_t chain) {
  const double s1 = (chain & 1) ? -1.0 : 1.0;
  const double s2 = (chain & 2) ? -1.0 : 1.0;
  const double dn = static_cast<double>(n);
  ModelParams p;
  p.mu_x = m.mean_x + 2.0 * s1 * m.sd_x / std::sqrt(dn);
  p.mu_y = m.mean_y + 2.0 * s2 * m.sd_y / std::sqrt(dn);
  p.sigma2_x =
      std::max(m.sd_x * m.sd_x, 1e-12) * std::exp(2.0 * s1 * std::sqrt(2.0 / dn));
  p.sigma2_y =
      std::max(m.sd_y * m.sd_y, 1e-12) * std::exp(2.0 * s2 * std::sqrt(2.0 / dn));
  const double z = std::atanh(std::clamp(m.corr, -0.999, 0.999)) +
                   2.0 * s1 * s2 / std::sqrt(std::max(dn - 3.0, 1.0));
  p.rho = std::tanh(z);
  return p;
}

constexpr int kAdaptWindow = 50;

}  // namespace

ChainTrace run_chain(const ObservationSet& data, const PriorSpec& prior,
                     const ModelParams& init, const SamplerConfig& config) {
  validate_prior(prior);
  validate_params(init);
  const SufficientStats stats = compute_sufficient_stats(data);

  for (ParamId id :
       {ParamId::MuX, ParamId::MuY, ParamId::Sigma2X, ParamId::Sigma2Y}) {
    double v = 0.0;
    switch (id) {
      case ParamId::MuX: v = init.mu_x; break;
      case ParamId::MuY: v = init.mu_y; break;
      case ParamId::Sigma2X: v = init.sigma2_x; break;
      case ParamId::Sigma2Y: v = init.sigma2_y; break;
      case ParamId::Rho: break;
    }
    if (!std::isfinite(log_full_conditional(id, v, init, stats, prior)))
      throw std::invalid_argument(
          std::string("run_chain: non-finite conditional at init for ") +
          param_name(id));
  }
  rho_mle(init, stats);  // throws on degenerate data

  RandomStream rng(config.seed);
  ProposalScales scales{config.proposal_sd_mu_x, config.proposal_sd_mu_y,
                        config.proposal_sd_logsigma2_x,
                        config.proposal_sd_logsigma2_y};
  for (ParamId id :
       {ParamId::MuX, ParamId::MuY, ParamId::Sigma2X, ParamId::Sigma2Y})
    if (!(scales.of(id) > 0.0))
      throw std::invalid_argument("run_chain: proposal scales must be > 0");

  ModelParams state = init;
  std::array<int, 5> win_attempts{}, win_accepts{};
  for (std::size_t step = 0; step < config.burn_in; ++step) {
    const TransitionRecord rec = gibbs_transition(
        state, stats, prior, config.scan, step, scales, config.trunc, rng);
    if (config.adapt_during_burnin && rec.param != ParamId::Rho) {
      const auto k = static_cast<std::size_t>(rec.param);
      ++win_attempts[k];
      win_accepts[k] += rec.accepted ? 1 : 0;
      if (win_attempts[k] == kAdaptWindow) {
        const double rate =
            static_cast<double>(win_accepts[k]) / kAdaptWindow;
        double& s = scales.of(rec.param);
        if (rate > 0.5) s *= 1.4;
        else if (rate < 0.2) s *= 0.7;
        s = std::clamp(s, 1e-8, 1e8);
        win_attempts[k] = 0;
        win_accepts[k] = 0;
      }
    }
  }

  // Scales are frozen from here on so the recorded kernel is homogeneous.
  ChainTrace trace;
  trace.config = config;
  trace.states.reserve(config.iterations);
  std::array<std::size_t, 5> attempts{}, accepts{};
  for (std::size_t i = 0; i < config.iterations; ++i) {
    const TransitionRecord rec =
        gibbs_transition(state, stats, prior, config.scan,
                         config.burn_in + i, scales, config.trunc, rng);
    const auto k = static_cast<std::size_t>(rec.param);
    ++attempts[k];
    accepts[k] += rec.accepted ? 1 : 0;
    trace.states.push_back(state);
  }
  for (std::size_t k = 0; k < 5; ++k)
    trace.acceptance_rates[k] =
        attempts[k] ? static_cast<double>(accepts[k]) / attempts[k] : 0.0;
  return trace;
}

std::vector<ChainTrace> run_multi_chain(const ObservationSet& data,
                                        const PriorSpec& prior,
                                        const SamplerConfig& config,
                                        std::size_t n_chains,
                                        std::uint64_t base_seed) {
  if (n_chains < 1)
    throw std::invalid_argument("run_multi_chain: need at least one chain");
  const SampleMoments m = sample_moments(data);
  std::vector<ChainTrace> traces;
  traces.reserve(n_chains);
  for (std::size_t i = 0; i < n_chains; ++i) {
    SamplerConfig cfg = config;
    cfg.seed = base_seed + i;
    traces.push_back(
        run_chain(data, prior, dispersed_init(m, data.size(), i), cfg));
  }
  return traces;
}

}  // namespace fusion
