// Acceptance suite: one test case per criterion, one pass/fail line each.
// Runtime limits are asserted with steady-clock timing.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fusion/analysis.hpp"
#include "fusion/csv.hpp"
#include "fusion/nmath.hpp"
#include "fusion/sampler.hpp"
#include "helpers.hpp"

using namespace fusion;
namespace fs = std::filesystem;

namespace {

struct CriterionLine {
  const char* name;
  bool ok = false;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
  ~CriterionLine() {
    std::printf("[%s] %s (%.1fs)\n", ok ? "PASS" : "FAIL", name, seconds());
    std::fflush(stdout);
  }
};

PriorSpec experiment_prior() {
  PriorSpec p;
  p.mu_prime_x = 0.3;
  p.sigma_prime_x = 1.2;
  p.n_prime_x = 50.0;
  p.mu_prime_y = 0.2;
  p.sigma_prime_y = 0.75;
  p.n_prime_y = 100.0;
  return p;
}

ObservationSet experiment_data() {
  return synthesize_matching_dataset(100, 0.0925, 1.053, 0.0400, 0.866,
                                     0.780, 20220815);
}

// Mean of sigma when nu s^2 / sigma^2 is chi-square with nu df:
// E[sigma] = s sqrt(nu/2) Gamma((nu-1)/2) / Gamma(nu/2).
double sigma_mean_of_scaled_inv_chi(double s, double nu) {
  return s * std::sqrt(0.5 * nu) *
         std::exp(std::lgamma(0.5 * (nu - 1.0)) - std::lgamma(0.5 * nu));
}

double pooled_mean(const std::vector<ChainTrace>& traces, ParamId id,
                   bool sqrt_scale = false) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : traces)
    for (const auto& s : t.states) {
      double v = 0.0;
      switch (id) {
        case ParamId::MuX: v = s.mu_x; break;
        case ParamId::MuY: v = s.mu_y; break;
        case ParamId::Sigma2X: v = s.sigma2_x; break;
        case ParamId::Sigma2Y: v = s.sigma2_y; break;
        case ParamId::Rho: v = s.rho; break;
      }
      sum += sqrt_scale ? std::sqrt(v) : v;
      ++count;
    }
  return sum / static_cast<double>(count);
}

bool between(double v, double a, double b) {
  return v >= std::min(a, b) && v <= std::max(a, b);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FUSION_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("criterion 1: cubic MLE agrees with brute-force maximisation") {
  CriterionLine line{"criterion 1: cubic MLE vs grid+golden-section oracle"};
  RandomStream rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    ModelParams truth;
    truth.mu_x = rng.normal();
    truth.mu_y = rng.normal();
    truth.sigma2_x = std::exp(0.5 * rng.normal());
    truth.sigma2_y = std::exp(0.5 * rng.normal());
    truth.rho = 1.8 * (rng.uniform() - 0.5);
    const ObservationSet data = testutil::draw_bvn(100, truth, rng);
    const SufficientStats stats = compute_sufficient_stats(data);

    const double fit = rho_mle(truth, stats);
    const double oracle = testutil::rho_mle_oracle(data, truth);
    REQUIRE(std::abs(fit - oracle) <= 1e-6);

    const CenteredSums c = centered_sums(stats, truth.mu_x, truth.mu_y);
    const double a = c.s_xy / std::sqrt(truth.sigma2_x * truth.sigma2_y);
    const double b = c.s_xx / truth.sigma2_x;
    const double cc = c.s_yy / truth.sigma2_y;
    const double n = 100.0;
    const double residual =
        -n * fit * fit * fit + a * fit * fit + (n - b - cc) * fit + a;
    const double scale = n * std::abs(fit * fit * fit) +
                         std::abs(a * fit * fit) +
                         std::abs((n - b - cc) * fit) + std::abs(a);
    REQUIRE(std::abs(residual) <= 1e-10 * scale);
  }
  CHECK(line.seconds() < 10.0);
  line.ok = true;
}

TEST_CASE("criterion 2: fiducial density normalizes to one") {
  CriterionLine line{"criterion 2: fiducial density quadrature mass = 1"};
  RandomStream rng(1002);
  const std::size_t sizes[] = {20, 50, 100, 250, 500};
  for (int trial = 0; trial < 100; ++trial) {
    const double rho_hat = 1.9 * (rng.uniform() - 0.5);
    const std::size_t n = sizes[trial % 5];
    const double frac = 0.15 + 0.8 * rng.uniform();
    const double alpha = frac * max_alpha(rho_hat, n, 1.0).alpha;
    REQUIRE(check_bijectivity(rho_hat, n, alpha));
    const TruncationConfig tc{alpha};
    const RhoSupport sup = rho_support(rho_hat, n, tc);
    const double mass = testutil::integrate_fiducial_mass(rho_hat, n, tc, sup);
    REQUIRE(std::abs(mass - 1.0) <= 1e-6);
  }
  CHECK(line.seconds() < 10.0);
  line.ok = true;
}

TEST_CASE("criterion 3: exact rho sampling passes a KS test at 1%") {
  CriterionLine line{"criterion 3: sample_rho vs quadrature CDF (KS, 1%)"};
  const double rho_hat = 0.78;
  const std::size_t n = 100;
  const TruncationConfig tc = max_alpha(rho_hat, n, 0.9);
  const RhoSupport sup = rho_support(rho_hat, n, tc);

  RandomStream rng(1003);
  std::vector<double> draws(100000);
  for (double& d : draws) d = sample_rho(rho_hat, n, tc, sup, rng);

  const testutil::GridCdf cdf = testutil::make_grid_cdf(
      [&](double r) {
        return std::exp(fiducial_logdensity_rho(r, rho_hat, n, tc, sup));
      },
      sup.rho_lo, sup.rho_hi, 8192);
  const double ks = testutil::ks_statistic(draws, cdf);
  REQUIRE(ks < testutil::ks_critical_1pct(draws.size()));
  CHECK(line.seconds() < 30.0);
  line.ok = true;
}

TEST_CASE("criterion 4: truncation bound magnitude and monotonicity") {
  CriterionLine line{"criterion 4: max alpha >= 36 at rho_hat=0.999, monotone"};
  REQUIRE(max_alpha(0.999, 100, 1.0).alpha >= 36.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double rh : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95,
                    0.99, 0.995, 0.999}) {
    const double a = max_alpha(rh, 100, 1.0).alpha;
    REQUIRE(a <= prev * (1.0 + 1e-12));
    prev = a;
  }
  line.ok = true;
}

TEST_CASE("criterion 5: Metropolis kernels hit the conjugate laws at rho=0") {
  CriterionLine line{"criterion 5: conjugate oracles for mu_x and sigma2_x"};
  const PriorSpec prior = experiment_prior();
  const ObservationSet data = experiment_data();
  const SufficientStats stats = compute_sufficient_stats(data);
  const double n = static_cast<double>(stats.n);
  const SampleMoments m = sample_moments(data);
  const ModelParams state{m.mean_x, m.mean_y, m.sd_x * m.sd_x,
                          m.sd_y * m.sd_y, 0.0};
  const int thin = 50;
  const std::size_t kept = 100000;

  {
    const double xbar = stats.sum_x / n;
    const double post_mean =
        (prior.n_prime_x * prior.mu_prime_x + n * xbar) /
        (prior.n_prime_x + n);
    const double post_sd = std::sqrt(state.sigma2_x / (prior.n_prime_x + n));
    RandomStream rng(1005);
    ModelParams cur = state;
    std::vector<double> draws;
    draws.reserve(kept);
    for (std::size_t k = 0; k < kept * thin; ++k) {
      cur = metropolis_update(ParamId::MuX, cur, stats, prior,
                              1.5 * post_sd, rng)
                .params;
      if ((k + 1) % thin == 0) draws.push_back(cur.mu_x);
    }
    const double ks = testutil::ks_statistic(draws, [&](double v) {
      return normal_cdf((v - post_mean) / post_sd);
    });
    REQUIRE(ks < testutil::ks_critical_1pct(draws.size()));
  }
  {
    const CenteredSums c = centered_sums(stats, state.mu_x, state.mu_y);
    const double shape = 0.5 * prior.n_prime_x + 0.5 * n;
    const double scale =
        beta_scale(prior, Side::X, state.mu_x) + 0.5 * c.s_xx;
    RandomStream rng(1006);
    ModelParams cur = state;
    std::vector<double> draws;
    draws.reserve(kept);
    for (std::size_t k = 0; k < kept * thin; ++k) {
      cur = metropolis_update(ParamId::Sigma2X, cur, stats, prior, 0.25, rng)
                .params;
      if ((k + 1) % thin == 0) draws.push_back(cur.sigma2_x);
    }
    const double ks = testutil::ks_statistic(
        draws, [&](double v) { return inv_gamma_cdf(v, shape, scale); });
    REQUIRE(ks < testutil::ks_critical_1pct(draws.size()));
  }
  CHECK(line.seconds() < 60.0);
  line.ok = true;
}

TEST_CASE("criterion 6: joint prior matches both conditionals on a grid") {
  CriterionLine line{"criterion 6: prior compatibility on a 100x100 grid"};
  const PriorSpec prior = experiment_prior();
  for (Side side : {Side::X, Side::Y}) {
    const PriorMarginals m = joint_prior_marginals(prior, side);
    const double mu0 = (side == Side::X) ? 0.3 : 0.2;
    const double s0 = (side == Side::X) ? 1.2 : 0.75;
    const double np = (side == Side::X) ? 50.0 : 100.0;
    for (int i = 0; i < 100; ++i) {
      const double mu =
          mu0 + (i - 49.5) * 0.08 * s0 / std::sqrt(np);
      for (int j = 0; j < 100; ++j) {
        const double sigma2 = s0 * s0 * (0.35 + 0.025 * j);
        const double log_joint =
            m.log_pdf_sigma2(sigma2) + log_prior_mu(side, mu, sigma2, prior);
        // Factorisation through the mu marginal must reproduce the
        // conditional variance prior...
        const double lhs_s2 = log_joint - m.log_pdf_mu(mu);
        const double rhs_s2 = log_prior_sigma2(side, sigma2, mu, prior);
        REQUIRE(std::abs(lhs_s2 - rhs_s2) <= 1e-10);
        // ...and through the sigma2 marginal, the conditional mean prior.
        const double lhs_mu = log_joint - m.log_pdf_sigma2(sigma2);
        const double rhs_mu = log_prior_mu(side, mu, sigma2, prior);
        REQUIRE(std::abs(lhs_mu - rhs_mu) <= 1e-10);
      }
    }
  }
  line.ok = true;
}

TEST_CASE("criterion 7: desk-scale reproduction of the main experiment") {
  CriterionLine line{"criterion 7: 4 chains, PSRF < 1.01, rho within 0.78 +- 0.03, "
                     "means between prior and fiducial references"};
  const PriorSpec prior = experiment_prior();
  const ObservationSet data = experiment_data();
  SamplerConfig cfg;
  cfg.iterations = 200000;
  cfg.burn_in = 5000;

  const std::vector<ChainTrace> traces =
      run_multi_chain(data, prior, cfg, 4, 90001);
  const ConvergenceReport rep = gelman_rubin(traces, 1.01);
  for (double p : rep.psrf) REQUIRE(p < 1.01);
  REQUIRE(rep.pass);

  const double rho_mean = pooled_mean(traces, ParamId::Rho);
  REQUIRE(rho_mean >= 0.75);
  REQUIRE(rho_mean <= 0.81);

  // Location check: each posterior mean must land between the prior-mean and
  // the single-variable fiducial mean of its parameter.
  REQUIRE(between(pooled_mean(traces, ParamId::MuX), 0.0925, 0.3));
  REQUIRE(between(pooled_mean(traces, ParamId::MuY), 0.0400, 0.2));
  const double prior_sx = sigma_mean_of_scaled_inv_chi(1.2, 49.0);
  const double fid_sx = sigma_mean_of_scaled_inv_chi(1.053, 99.0);
  const double prior_sy = sigma_mean_of_scaled_inv_chi(0.75, 99.0);
  const double fid_sy = sigma_mean_of_scaled_inv_chi(0.866, 99.0);
  REQUIRE(between(pooled_mean(traces, ParamId::Sigma2X, true), prior_sx,
                  fid_sx));
  REQUIRE(between(pooled_mean(traces, ParamId::Sigma2Y, true), prior_sy,
                  fid_sy));

  // Histograms on the same scales as the overlay curves stay well formed.
  std::vector<double> sigma_x;
  sigma_x.reserve(traces[0].states.size());
  for (const auto& s : traces[0].states) sigma_x.push_back(std::sqrt(s.sigma2_x));
  const DensityCurve h = histogram(sigma_x, 60);
  const double w = h.xs[1] - h.xs[0];
  double area = 0.0;
  for (double y : h.ys) area += y * w;
  REQUIRE(std::abs(area - 1.0) <= 1e-12);

  CHECK(line.seconds() < 600.0);
  line.ok = true;
}

TEST_CASE("criterion 8: scan orders agree within Monte Carlo error") {
  CriterionLine line{"criterion 8: uniform vs 3 fixed scan orders, |z| < 3"};
  const PriorSpec prior = experiment_prior();
  const ObservationSet data = experiment_data();
  const ModelParams init = moment_init(data);
  SamplerConfig cfg;
  cfg.iterations = 200000;
  cfg.burn_in = 5000;

  const std::vector<std::string> orders = {
      "uniform",
      "mu_x,mu_y,sigma2_x,sigma2_y,rho",
      "rho,sigma2_y,mu_x,sigma2_x,mu_y",
      "sigma2_x,rho,mu_y,mu_x,sigma2_y",
  };
  std::vector<std::pair<std::string, std::vector<ModelParams>>> runs;
  std::uint64_t seed = 90100;
  for (const auto& label : orders) {
    SamplerConfig c = cfg;
    c.scan = parse_scan_policy(label);
    c.seed = seed++;
    runs.emplace_back(label, run_chain(data, prior, init, c).states);
  }
  const ScanComparison cmp = compare_scan_orders(runs);
  for (const auto& pair : cmp.pairs)
    for (double z : pair.mean_diff_z) REQUIRE(std::abs(z) < 3.0);
  REQUIRE_FALSE(cmp.flag);
  CHECK(line.seconds() < 900.0);
  line.ok = true;
}

TEST_CASE("criterion 9: pivot derivative matches finite differences") {
  CriterionLine line{"criterion 9: dgamma/drho vs central differences"};
  const std::size_t ns[] = {20, 100, 1000};
  for (std::size_t n : ns) {
    for (int i = 0; i < 50; ++i) {
      const double rho = -0.97 + 1.94 * i / 49.0;
      for (int j = 0; j < 50; ++j) {
        const double rho_hat = -0.95 + 1.90 * j / 49.0;
        const double h = 1e-6;
        const double fd = (gamma_of_rho(rho + h, rho_hat, n).gamma -
                           gamma_of_rho(rho - h, rho_hat, n).gamma) /
                          (2.0 * h);
        const double an = gamma_of_rho(rho, rho_hat, n).dgamma_drho;
        REQUIRE(std::abs(fd - an) <= 1e-6 * std::abs(an));
      }
    }
  }
  line.ok = true;
}

TEST_CASE("criterion 10: confidence density normalization and median") {
  CriterionLine line{"criterion 10: confidence density mass 1, median at r"};
  const double r = 0.780;
  const std::size_t n = 100;
  const double mass = integrate_finite(
      [&](double rho) { return confidence_rho_pdf(rho, r, n); },
      -1.0 + 1e-12, 1.0 - 1e-12, 1e-10);
  REQUIRE(std::abs(mass - 1.0) <= 1e-6);
  const DensityCurve curve = confidence_density_rho(r, n, 4096);
  REQUIRE(std::abs(curve_median(curve) - r) <= 1e-6);
  line.ok = true;
}

TEST_CASE("criterion 11: bit-identical traces for identical config and seed") {
  CriterionLine line{"criterion 11: CLI determinism, identical trace bytes"};
  char tmpl[] = "/tmp/fusion_accept_XXXXXX";
  REQUIRE(mkdtemp(tmpl) != nullptr);
  const fs::path dir(tmpl);
  const std::string data = (dir / "data.csv").string();
  REQUIRE(run_cli("simulate --n 100 --mean-x 0.0925 --sd-x 1.053 --mean-y "
                  "0.0400 --sd-y 0.866 --corr 0.780 --seed 7 --out " +
                  data) == 0);
  const std::string args = "run --data " + data +
                           " --iters 5000 --burn-in 500 --seed 77 --chains 2 "
                           "--out-dir ";
  REQUIRE(run_cli(args + (dir / "r1").string()) == 0);
  REQUIRE(run_cli(args + (dir / "r2").string()) == 0);
  REQUIRE(slurp((dir / "r1" / "trace_0.csv").string()) ==
          slurp((dir / "r2" / "trace_0.csv").string()));
  REQUIRE(slurp((dir / "r1" / "trace_1.csv").string()) ==
          slurp((dir / "r2" / "trace_1.csv").string()));
  std::error_code ec;
  fs::remove_all(dir, ec);
  line.ok = true;
}
