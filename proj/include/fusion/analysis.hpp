#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fusion/conditionals.hpp"
#include "fusion/sampler.hpp"

// Trace summaries, Gelman-Rubin convergence diagnostics, density curves for
// the overlay plots, and the scan-order comparison report.

namespace fusion {

struct ParamSummary {
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double median = 0.0;
  double q975 = 0.0;
  double mcse = 0.0;  // batch means, floor(sqrt(L)) batches
};

struct ChainSummary {
  std::size_t length = 0;
  std::array<ParamSummary, 5> params{};
  std::array<double, 5> acceptance_rates{};
};

ChainSummary summarize(const ChainTrace& trace);
ChainSummary summarize_states(const std::vector<ModelParams>& states);

struct ConvergenceReport {
  std::array<double, 5> psrf{};
  std::array<std::vector<double>, 5> chain_means{};
  std::array<std::vector<double>, 5> chain_variances{};
  double threshold = 1.01;
  bool pass = false;
  // Plain 1992 between/within form, no (m+1)/m correction:
  //   PSRF = sqrt((((L-1)/L) W + B/L) / W).
  static constexpr const char* kVariant = "gelman-rubin-1992-plain";
};

ConvergenceReport gelman_rubin(const std::vector<std::vector<ModelParams>>& chains,
                               double threshold = 1.01);
ConvergenceReport gelman_rubin(const std::vector<ChainTrace>& traces,
                               double threshold = 1.01);

enum class CurveKind {
  Histogram,
  FiducialMu,
  FiducialSigma,
  PriorMu,
  PriorSigma,
  ConfidenceRho,
  FiducialRhoConditional,
};

// Strictly increasing abscissae; normalized kinds (everything except
// Histogram) carry a trapezoid area within 1e-3 of 1, enforced at
// construction. Histogram bar areas sum to 1 by construction instead.
struct DensityCurve {
  CurveKind kind = CurveKind::Histogram;
  std::vector<double> xs;
  std::vector<double> ys;
};

double trapezoid_area(const DensityCurve& curve);
// Abscissa at which the interpolated cumulative trapezoid mass reaches half
// of the total.
double curve_median(const DensityCurve& curve);

// Density-normalized histogram (total bar area 1 over the included values).
// Without an explicit range, [min, max] is used, widened by 0.5 each way if
// degenerate. sigma-parameters are expected on the sigma = sqrt(sigma2)
// scale by the callers that plot them.
DensityCurve histogram(const std::vector<double>& values, std::size_t bins,
                       std::optional<std::pair<double, double>> range = {});

// Scalar densities behind the curves.
double fiducial_mu_pdf(double mu, double xbar, double s, std::size_t n);
double fiducial_sigma_pdf(double sigma, double s, std::size_t n);
double fiducial_sigma2_pdf(double sigma2, double s, std::size_t n);
double confidence_rho_pdf(double rho, double r, std::size_t n);
double normal_mean_fiducial_pdf(double mu, double xbar, double sigma2,
                                std::size_t n);

// Curve builders; grids are quantile-spaced so the trapezoid area invariant
// holds even for heavy-tailed small-n cases. `points` defaults to 512.
DensityCurve marginal_fiducial_mu(double xbar, double s, std::size_t n,
                                  std::size_t points = 512);
DensityCurve marginal_fiducial_sigma(double s, std::size_t n,
                                     std::size_t points = 512);
DensityCurve confidence_density_rho(double r, std::size_t n,
                                    std::size_t points = 512);
// N(xbar, sigma2/n); emitted with kind FiducialMu.
DensityCurve normal_mean_fiducial(double xbar, double sigma2, std::size_t n,
                                  std::size_t points = 512);
DensityCurve prior_mu_curve(const PriorSpec& prior, Side side,
                            std::size_t points = 512);
DensityCurve prior_sigma_curve(const PriorSpec& prior, Side side,
                               std::size_t points = 512);
// Conditional fiducial density of rho on its induced support.
DensityCurve fiducial_rho_curve(double rho_hat, std::size_t n, double alpha,
                                std::size_t points = 512);

struct ScanComparison {
  struct Pair {
    std::string a;
    std::string b;
    std::array<double, 5> mean_diff_z{};  // mean difference / pooled MCSE
    double max_corr_diff = 0.0;  // max |corr matrix entry| difference
  };
  std::vector<Pair> pairs;
  double z_threshold = 3.0;
  bool flag = false;  // any |z| > threshold
};

ScanComparison compare_scan_orders(
    const std::vector<std::pair<std::string, std::vector<ModelParams>>>& traces);

}  // namespace fusion
