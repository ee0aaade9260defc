#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maternlab/gp.hpp"
#include "maternlab/kernels.hpp"
#include "maternlab/linalg.hpp"
#include "maternlab/parallel.hpp"

namespace maternlab {

/// mu value standing for the Matern limit in sparsity tables.
inline constexpr double kMuInfinity = std::numeric_limits<double>::infinity();

struct SparsityConfig {
  std::vector<double> kappa_list{0.0, 1.0, 2.0};
  /// kMuInfinity selects the Matern member. Entries below the validity bound
  /// (d + 1)/2 + kappa of a given kappa are skipped for that kappa.
  std::vector<double> mu_list{4.0, 8.0, 16.0, 32.0, 120.0, kMuInfinity};
  /// Prepend the smallest valid mu, (d + 1)/2 + kappa, for each kappa.
  bool include_boundary_mu = true;
  double target_range = 0.15;
  std::vector<double> spacing_list{0.03, 0.015};
  double epsilon = 1e-8;
  int d = 2;
};

struct SparsityRow {
  std::string family;
  double kappa = 0.0;
  double mu = 0.0;
  double beta = 0.0;
  /// Support radius; infinity for the Matern member.
  double support = 0.0;
  std::size_t n = 0;
  double pct_zero_cov = 0.0;
  double pct_quasi_prec = 0.0;
  double pct_quasi_chol = 0.0;
  double epsilon = 0.0;
};

/// Scale beta for which Matern(kappa + 1/2, beta) has practical range
/// `target_range` in dimension d.
double calibrate_matern_beta(double kappa, int d, double target_range);

/// One row per (kappa, mu, spacing), in that nesting order. Covariance
/// matrices use natural grid ordering; the Cholesky factor is that of the
/// explicitly inverted covariance and is counted on its upper factor.
std::vector<SparsityRow> sparsity_table(const SparsityConfig& cfg,
                                        Executor& exec = serial_executor());

std::string sparsity_csv(const std::vector<SparsityRow>& rows, const std::string& header_line);

struct ScreeningScheme {
  /// Lattice offset: sites are eps * (offset + j), j integer; the predictand
  /// is the origin. Must not be an integer vector.
  std::vector<double> offset{0.3};
  /// Size of the near set N (nearest lattice sites, ties to enumeration order).
  std::size_t near_count = 4;
  /// Far set F is every other lattice site in [-truncation, truncation]^d.
  double truncation = 1.0;
};

struct ScreeningPoint {
  double epsilon = 0.0;
  std::size_t near = 0;
  std::size_t far = 0;
  double mse_near = 0.0;
  double mse_all = 0.0;
  /// mse_all / mse_near, in (0, 1].
  double ratio = 1.0;
};

std::vector<ScreeningPoint> screening_ratio(const CovarianceModel& model, int d,
                                            const ScreeningScheme& scheme,
                                            const std::vector<double>& epsilon_list,
                                            Executor& exec = serial_executor());

std::string screening_csv(const std::vector<ScreeningPoint>& pts, const std::string& header_line);

struct SteinPoint {
  double omega = 0.0;
  double sup_ratio_deviation = 0.0;
};

/// sup over |tau| < R (32 directions x 8 radii) of |f(w + tau)/f(w) - 1| for
/// each |w|. `radii_count = 0` checks tau = 0 only.
std::vector<SteinPoint> stein_hypothesis_check(const KernelSpec& spec, int d, double radius,
                                               const std::vector<double>& omega_magnitudes,
                                               int directions = 32, int radii_count = 8);

std::string stein_csv(const std::vector<SteinPoint>& pts, const std::string& header_line);

struct FourierPoint {
  double z = 0.0;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double rel_error = 0.0;
};

std::vector<FourierPoint> fourier_points(const KernelSpec& spec, int d,
                                         const std::vector<double>& z_grid,
                                         Executor& exec = serial_executor());

/// max |radial_fourier - spectral_density| / spectral_density over z_grid.
double fourier_consistency(const KernelSpec& spec, int d, const std::vector<double>& z_grid,
                           Executor& exec = serial_executor());

std::string fourier_csv(const std::vector<FourierPoint>& pts, const std::string& header_line);

struct LimitPoint {
  std::string limit;
  std::string parameter;
  double value = 0.0;
  double sup_distance = 0.0;
};

struct LimitSuiteConfig {
  int d = 1;
  std::vector<double> grid;  // empty: 601 points on [0, 3]
  double gw_kappa = 1.0;
  double gw_beta = 1.0;
  std::vector<double> gw_mu{1e2, 1e3, 1e4};
  double ch_nu = 0.5;
  double ch_beta = 1.0;
  std::vector<double> ch_eta{1e2, 1e3, 1e4};
  double gauss_alpha = 1.0;
  std::vector<double> gauss_nu{1e2, 1e4, 1e6};
  double gh_kappa = 1.0;
  double gh_mu = 5.0;
  double gh_beta = 1.0;
  /// GH(kappa, T, T, 2 alpha T) against Matern(kappa - d/2, alpha).
  double gh_matern_kappa = 1.5;
  double gh_matern_alpha = 0.5;
  std::vector<double> gh_matern_t{10.0, 100.0, 1000.0};
};

/// GH -> GW identity, GW-tilde -> Matern (mu up), CH -> Matern (eta up),
/// Matern -> Gaussian (nu up), GH -> Matern (delta = gamma = T up).
std::vector<LimitPoint> kernel_limit_suite(const LimitSuiteConfig& cfg = {},
                                           Executor& exec = serial_executor());

std::string limits_csv(const std::vector<LimitPoint>& pts, const std::string& header_line);

struct McConfig {
  CovarianceModel true_model{Matern{0.5, 0.1}, 1.0};
  int d = 1;
  std::vector<std::size_t> n_list{125, 250, 500};
  std::size_t reps = 200;
  std::uint64_t seed = 0;
  /// Parameters estimated; the rest (smoothness included) stay at truth.
  std::vector<std::string> free{"alpha"};
  FitOptions fit;
};

struct McReplicate {
  std::size_t rep = 0;
  std::size_t n = 0;
  double micro_hat = 0.0;
  double standardized_stat = 0.0;
  bool failed = false;
};

struct McSummary {
  std::size_t n = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  double mean_abs_rel_error_micro = 0.0;
  double standardized_mean = 0.0;
  double standardized_sd = 0.0;
};

struct McResult {
  std::vector<McReplicate> replicates;
  std::vector<McSummary> summary;
};

/// Equispaced design with n sites per axis-product in [0, 1]^d (n must be a
/// perfect d-th power).
SiteSet unit_design(std::size_t n, int d);

/// Fixed-domain ML Monte Carlo for the microergodic parameter. Replicate r of
/// the k-th n uses the stream (derive_seed(seed, k), r).
McResult ml_microergodic_mc(const McConfig& cfg, Executor& exec = serial_executor());

std::string mc_csv(const McResult& res, const std::string& header_line);
std::string mc_summary_csv(const McResult& res, const std::string& header_line);

/// max over scales of |s_scale(x0) - s_1(x0)| for the polynomially augmented
/// polyharmonic interpolant.
double polyharmonic_scale_invariance(double nu, const SiteSet& sites,
                                     const Eigen::VectorXd& values, std::span<const double> x0,
                                     const std::vector<double>& scale_list);

struct VecchiaStudyConfig {
  CovarianceModel model{Matern{0.5, 0.3}, 1.0};
  int d = 2;
  std::size_t n = 400;
  std::size_t m = 10;
  std::size_t seeds = 50;
  std::uint64_t seed = 0;
  std::vector<Ordering> orderings{Ordering::natural, Ordering::maxmin};
};

struct VecchiaStudyRow {
  std::size_t seed_index = 0;
  Ordering ordering = Ordering::natural;
  double exact = 0.0;
  double vecchia = 0.0;
  double abs_error = 0.0;
};

/// Random uniform sites in [0, 1]^d per seed, data simulated under the
/// model, then each ordering scored against the exact log-likelihood.
std::vector<VecchiaStudyRow> vecchia_ordering_study(const VecchiaStudyConfig& cfg,
                                                    Executor& exec = serial_executor());

std::string vecchia_csv(const std::vector<VecchiaStudyRow>& rows, const std::string& header_line);

}  // namespace maternlab
