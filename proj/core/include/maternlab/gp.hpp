#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maternlab/kernels.hpp"
#include "maternlab/linalg.hpp"
#include "maternlab/parallel.hpp"

namespace maternlab {

struct GpDataset {
  SiteSet sites;
  Eigen::VectorXd values;
  std::size_t replicate = 0;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Replicate r is L u with u drawn from CounterRng(seed, r).
std::vector<GpDataset> simulate(const CovarianceModel& model, const SiteSet& sites,
                                std::uint64_t seed, std::size_t replicates,
                                Executor& exec = serial_executor());

/// Simple (zero-mean) kriging. At an observed site the observation is
/// returned with zero variance.
Prediction krige(const CovarianceModel& model, const GpDataset& data, std::span<const double> x0);

/// Square root of the kriging variance; sigma for an empty design.
double power_function(const CovarianceModel& model, const SiteSet& sites,
                      std::span<const double> x0);

/// Z^T R^{-1} Z with R the correlation matrix.
double interpolant_norm2(const CovarianceModel& model, const GpDataset& data);

/// Gaussian log-likelihood including the -(n/2) log(2 pi) term.
double log_likelihood(const CovarianceModel& model, const GpDataset& data);

struct ConcentratedLik {
  double value = 0.0;
  double sigma2_hat = 0.0;
};

/// Likelihood with sigma2 profiled out (sigma2_hat = Z^T R^{-1} Z / n).
/// Throws FlatData when Z is identically zero.
ConcentratedLik concentrated_loglik(const KernelSpec& kernel, const GpDataset& data,
                                    JitterPolicy jitter = JitterPolicy::none);

struct ParamBounds {
  double lower = 1e-6;
  double upper = 1e6;
};

struct FitSpec {
  KernelSpec init;
  /// Parameters optimized (on the log scale); all others stay at init.
  std::vector<std::string> free;
  std::map<std::string, ParamBounds> bounds;
};

struct FitOptions {
  int starts = 3;
  int max_iterations = 2000;
  /// Simplex diameter in log-parameter space.
  double tolerance = 1e-8;
  /// Half-width of the uniform log-scale jitter applied to starts after the first.
  double start_jitter = 0.5;
  std::uint64_t seed = 0;
  JitterPolicy jitter = JitterPolicy::escalating;
};

struct FitResult {
  KernelSpec theta_hat = Matern{};
  double loglik = 0.0;
  double sigma2_hat = 0.0;
  double micro_hat = 0.0;
  int iterations = 0;
  bool converged = false;
  int failed_starts = 0;
};

/// Concentrated maximum likelihood by Nelder-Mead over log-parameters, best of
/// several starts. micro_hat is NaN for families without a microergodic
/// parameter.
FitResult fit_ml(const FitSpec& spec, const GpDataset& data, const FitOptions& opts = {});

/// sigma2 / alpha^(2 nu) (Matern), sigma2 / beta^(2 kappa + 1) (GW, beta the
/// support radius), sigma2 Gamma(nu + eta) / (beta^(2 nu) Gamma(eta)) (CH).
double microergodic(const CovarianceModel& model);

struct EquivalenceResult {
  bool equivalent = false;
  double condition_residual = 0.0;
  /// Side conditions that failed, if any.
  std::vector<std::string> notes;
};

/// Algebraic equivalence condition for Matern/Matern, Matern/GW and
/// Matern/CH pairs in d = 1, 2, 3 (either argument order).
EquivalenceResult equivalence_check(const CovarianceModel& a, const CovarianceModel& b, int d);

struct MisspecifiedMse {
  double mse_under_true_with_working_pred = 0.0;
  double mse_oracle = 0.0;
  double ratio_efficiency = 1.0;
  double mse_believed_by_working = 0.0;
  double ratio_variance_assessment = 1.0;
};

MisspecifiedMse misspecified_mse(const CovarianceModel& true_model,
                                 const CovarianceModel& working_model, const SiteSet& sites,
                                 std::span<const double> x0);

/// Vecchia approximation: each value conditioned on its m nearest previous
/// sites (ties to the lower index).
double vecchia_loglik(const CovarianceModel& model, const GpDataset& data, std::size_t m,
                      Executor& exec = serial_executor());

/// Indices of the m nearest earlier sites of site i, nearest first.
std::vector<std::size_t> vecchia_neighbors(const SiteSet& sites, std::size_t i, std::size_t m);

std::string to_json(const Prediction& p);
std::string to_json(const FitResult& r);

}  // namespace maternlab
