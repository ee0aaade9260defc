#pragma once

// Special functions needed by the correlation families.
//
// Accuracy targets (relative unless noted):
//   ln_gamma      1e-13 on [1e-3, 1e6]
//   bessel_k      1e-10 for nu in [0, 50], x in [1e-8, 700]
//   bessel_j      1e-9  for nu in [0, 20], x in [0, 200] (absolute near zeros)
//   gauss_2f1     1e-10 on z in [0, 1)
//   kummer_m      1e-9  and tricomi_u 1e-9 on a, |b| <= 10, z in [0, 500]
//
// Values below the smallest normal double are returned as 0.0.

#include <cstdint>

namespace maternlab::specfun {

struct AccuracyPolicy {
  double rel_tol = 1e-12;
  int max_terms = 10'000;
};

/// A value represented as mantissa * exp(log_scale); used where the
/// magnitude leaves the double range (large-order hypergeometrics).
struct Scaled {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const;
  /// log|value|; -inf for zero.
  double log_abs() const;
  int sign() const { return mantissa > 0 ? 1 : (mantissa < 0 ? -1 : 0); }
};

Scaled operator+(const Scaled& a, const Scaled& b);

double ln_gamma(double x);
double digamma(double x);

/// Modified Bessel function of the second kind. Returns +inf on overflow.
double bessel_k(double nu, double x);
/// log K_nu(x); finite wherever K_nu(x) is representable in log form.
double log_bessel_k(double nu, double x);
/// Bessel function of the first kind. Negative half-integer orders are
/// accepted only for nu = -1/2 (used by the d = 1 radial transform).
double bessel_j(double nu, double x);

/// Gauss hypergeometric 2F1(a, b; c; z) for 0 <= z < 1.
double gauss_2f1(double a, double b, double c, double z, const AccuracyPolicy& policy = {});
/// Direct power series in z (no transformation).
double gauss_2f1_series(double a, double b, double c, double z, const AccuracyPolicy& policy = {});
/// Evaluation through the z -> 1 - z connection formula.
double gauss_2f1_reflected(double a, double b, double c, double z,
                           const AccuracyPolicy& policy = {});
/// exp(log_prefactor) * 2F1(a, b; c; z) without intermediate overflow.
Scaled gauss_2f1_scaled(double a, double b, double c, double z, double log_prefactor,
                        const AccuracyPolicy& policy = {});

/// exp(log_prefactor) * 2F1(a, b; c; 1 - w) for 0 <= w <= 1. Taking the
/// complement directly avoids the rounding of 1 - z near z = 1; w = 0 is
/// allowed when c - a - b > 0.
Scaled gauss_2f1_complement(double a, double b, double c, double w, double log_prefactor,
                            const AccuracyPolicy& policy = {});

/// Kummer's confluent hypergeometric function M(a, b, z), z >= 0.
double kummer_m(double a, double b, double z, const AccuracyPolicy& policy = {});
/// Tricomi's confluent hypergeometric function U(a, b, z), a > 0, z >= 0.
double tricomi_u(double a, double b, double z, const AccuracyPolicy& policy = {});
/// exp(log_prefactor) * U(a, b, z).
Scaled tricomi_u_scaled(double a, double b, double z, double log_prefactor,
                        const AccuracyPolicy& policy = {});
/// U through the M-combination (small-z route); exposed for cross-checks.
Scaled tricomi_u_kummer(double a, double b, double z, double log_prefactor,
                        const AccuracyPolicy& policy = {});
/// U through its Laplace-integral representation; exposed for cross-checks.
Scaled tricomi_u_integral(double a, double b, double z, double log_prefactor,
                          const AccuracyPolicy& policy = {});

/// Gamma(d/2) (2/x)^(d/2-1) J_{d/2-1}(x); equals 1 at x = 0.
double omega_d(int d, double x);

/// Binomial coefficient; exact for n <= 60.
double binom(std::uint32_t n, std::uint32_t k);

}  // namespace maternlab::specfun
