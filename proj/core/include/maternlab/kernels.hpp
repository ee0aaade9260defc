#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace maternlab {

struct Matern {
  double nu = 0.5;
  double alpha = 1.0;
};

/// exp(-(x/alpha)^2); the nu -> infinity member of the Matern family under
/// the scale alpha / (2 sqrt(nu)).
struct GaussianKernel {
  double alpha = 1.0;
};

/// Truncated power (1 - x/beta)_+^mu.
struct Askey {
  double mu = 1.0;
  double beta = 1.0;
};

/// Generalized Wendland with support radius beta.
struct GenWendland {
  double kappa = 0.0;
  double mu = 1.0;
  double beta = 1.0;
};

/// Generalized Wendland whose support is gw_support_radius(kappa, mu, beta);
/// converges to Matern(kappa + 1/2, beta) as mu grows.
struct GenWendlandRescaled {
  double kappa = 0.0;
  double mu = 1.0;
  double beta = 1.0;
};

struct GaussHypergeometric {
  double kappa = 1.0;
  double delta = 1.0;
  double gamma_p = 1.0;
  double beta = 1.0;
  int d_ref = 1;
};

struct ConfluentHypergeometric {
  double nu = 0.5;
  double eta = 1.0;
  double beta = 1.0;
};

/// Conditionally positive definite; not a correlation. Evaluation returns
/// the signed radial function.
struct Polyharmonic {
  double nu = 1.0;
  int d_ref = 1;
};

/// Gneiting space-time Matern with psi(t) = (1 + psi_a t)^psi_lambda.
/// Point coordinates are (space..., time): the last coordinate is time.
struct SpaceTimeGneiting {
  double nu = 0.5;
  double alpha = 1.0;
  double psi_a = 1.0;
  double psi_lambda = 1.0;
};

using AnisotropyField = std::function<Eigen::MatrixXd(std::span<const double>)>;

/// Nonstationary Matern with location-dependent anisotropy. The field
/// callable must be reentrant.
struct PaciorekNS {
  double nu = 0.5;
  double alpha = 1.0;
  AnisotropyField anisotropy_field;
};

struct KernelSpec;

struct Tapered {
  std::shared_ptr<const KernelSpec> base;
  std::shared_ptr<const KernelSpec> taper;
};

struct KernelSpec {
  using Variant = std::variant<Matern, GaussianKernel, Askey, GenWendland, GenWendlandRescaled,
                               GaussHypergeometric, ConfluentHypergeometric, Polyharmonic,
                               Tapered, SpaceTimeGneiting, PaciorekNS>;
  Variant value;

  template <class T>
    requires std::is_constructible_v<Variant, T>
  KernelSpec(T v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(value);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(value);
  }

  /// Family name as used in JSON ("Matern", "Askey", ...).
  std::string family() const;
};

struct CovarianceModel {
  KernelSpec kernel;
  double sigma2 = 1.0;
};

/// Every violated membership condition of `spec` in dimension d; empty when valid.
std::vector<std::string> validate(const KernelSpec& spec, int d);
/// Throws ValidationError when validate() reports violations.
void require_valid(const KernelSpec& spec, int d);

/// Isotropic correlation phi(x). For SpaceTimeGneiting this is the purely
/// spatial margin (time lag 0). PaciorekNS is not isotropic; use
/// point_correlation.
double correlation(const KernelSpec& spec, int d, double x);

/// correlation() without the validity check; for inner loops that have
/// already validated the spec.
double correlation_unchecked(const KernelSpec& spec, int d, double x);

/// Correlation between two locations; works for every family.
double point_correlation(const KernelSpec& spec, std::span<const double> x,
                         std::span<const double> y);

/// Support radius of compactly supported families, nullopt otherwise.
std::optional<double> support_radius(const KernelSpec& spec);

enum class MaternPath { automatic, closed_form, bessel };

/// Matern correlation with an explicit evaluation path (closed_form requires
/// nu within 1e-9 of a half-integer).
double matern_correlation(double nu, double alpha, double x,
                          MaternPath path = MaternPath::automatic);

/// GW through its hypergeometric representation, independent of the
/// closed-form and integral paths used by correlation().
double gw_hypergeometric(double kappa, double mu, double beta, double x);

double gw_support_radius(double kappa, double mu, double beta);
double gw_rescaled_correlation(double kappa, double mu, double beta, int d, double x);

/// Product kernel; throws ValidationError when `taper_spec` is not compactly supported.
KernelSpec taper(const KernelSpec& base, const KernelSpec& taper_spec);

double spacetime_gneiting(double nu, double alpha, double psi_a, double psi_lambda, int d,
                          double x, double u);

double paciorek_ns(double nu, double alpha, const AnisotropyField& anisotropy_field,
                   std::span<const double> x, std::span<const double> y);

double polyharmonic_value(double nu, int d, double x);

/// Smallest distance with correlation(x) = level (bisection, 1e-10 relative).
double practical_range(const KernelSpec& spec, int d, double level = 0.05);

/// Scale parameter (alpha or beta) of a family; throws UnsupportedFamily
/// for families without one.
double scale_of(const KernelSpec& spec);
KernelSpec with_scale(const KernelSpec& spec, double scale);

/// Scale for which practical_range(with_scale(spec, scale)) = target_range.
/// The scale currently stored in `spec` is ignored.
double solve_scale_for_range(const KernelSpec& spec, int d, double target_range,
                             double level = 0.05);

double kernel_sup_distance(const KernelSpec& a, const KernelSpec& b, int d,
                           const std::vector<double>& grid);

/// State-space (SDE) form of Matern(k + 1/2, alpha) with variance sigma2.
struct StateSpaceModel {
  int k = 0;
  double alpha = 1.0;
  double sigma2 = 1.0;
  Eigen::MatrixXd drift;
  double noise_intensity = 0.0;
  Eigen::MatrixXd stationary_cov;
};

StateSpaceModel state_space_matern(int k, double alpha, double sigma2);
double state_space_autocov(const StateSpaceModel& model, double h);

/// Names of the real-valued parameters of a family (d_ref and nested
/// Tapered factors excluded).
std::vector<std::string> parameter_names(const KernelSpec& spec);
double get_parameter(const KernelSpec& spec, const std::string& name);
KernelSpec set_parameter(const KernelSpec& spec, const std::string& name, double value);

/// Serialization as {"family": ..., "params": {...}}. Tapered nests its
/// factors under "base" and "taper"; PaciorekNS cannot be serialized.
KernelSpec kernel_from_json(const std::string& text);
std::string kernel_to_json(const KernelSpec& spec);

}  // namespace maternlab
