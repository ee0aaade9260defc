#include "maternlab/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "maternlab/errors.hpp"

namespace maternlab::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 100'000;

// Taylor coefficients of 1/Gamma(1 + x) about x = 0.
constexpr std::array<double, 29> kRecipGamma = {
    1.00000000000000000000e+00,  5.77215664901532865549e-01,  -6.55878071520253902449e-01,
    -4.20026350340952370210e-02, 1.66538611382291479313e-01,  -4.21977345555443333902e-02,
    -9.62197152787697303211e-03, 7.21894324666309990246e-03,  -1.16516759185906516871e-03,
    -2.15241674114950975192e-04, 1.28050282388116195512e-04,  -2.01348547807882386862e-05,
    -1.25049348214267063072e-06, 1.13302723198169592860e-06,  -2.05633841697760707339e-07,
    6.11609510448141608721e-09,  5.00200764446922294544e-09,  -1.18127457048702004406e-09,
    1.04342671169110053979e-10,  7.78226343990507081432e-12,  -3.69680561864220597869e-12,
    5.10037028745447575372e-13,  -2.05832605356650663575e-14, -5.34812253942301782029e-15,
    1.22677862823826084089e-15,  -1.18125930169745883374e-16, 1.18669225475160037462e-18,
    1.41238065531803185733e-18,  -2.29874568443537021993e-19};

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2,
// plus 1/G(1+mu) and 1/G(1-mu), for |mu| <= 1/2 (Temme's auxiliary values).
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  const double mu2 = mu * mu;
  double even = 0.0;  // sum of c_{2j} mu^{2j}
  double odd = 0.0;   // sum of c_{2j+1} mu^{2j}
  double p = 1.0;
  for (std::size_t j = 0; 2 * j < kRecipGamma.size(); ++j) {
    even += kRecipGamma[2 * j] * p;
    if (2 * j + 1 < kRecipGamma.size()) odd += kRecipGamma[2 * j + 1] * p;
    p *= mu2;
  }
  // 1/G(1+mu) = even + mu*odd, 1/G(1-mu) = even - mu*odd
  return {-odd, even, even + mu * odd, even - mu * odd};
}

struct ScaledPair {
  double k_mu;   // K_mu(x) * exp(-log_scale)
  double k_mu1;  // K_{mu+1}(x) * exp(-log_scale)
  double log_scale;
};

// K_mu and K_{mu+1} for |mu| <= 1/2.
ScaledPair bessel_k_base(double xmu, double x) {
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = xmu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const auto g = temme_gammas(xmu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    const double xmu2 = xmu * xmu;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - xmu2);
      c *= d / i;
      p /= (i - xmu);
      q /= (i + xmu);
      const double del = c * ff;
      sum += del;
      const double del1 = c * (p - i * ff);
      sum1 += del1;
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw ConvergenceError("bessel_k: Temme series did not converge");
    return {sum, sum1 * xi2, 0.0};
  }
  // Steed's continued fraction (CF2), x >= 2. The exp(-x) factor is carried
  // in the log scale so arguments past the underflow threshold stay usable.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - xmu * xmu;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_k: continued fraction did not converge");
  h = a1 * h;
  const double kmu = std::sqrt(kPi / (2.0 * x)) / s;
  const double k1 = kmu * (xmu + x + 0.5 - h) * xi;
  return {kmu, k1, -x};
}

}  // namespace

double Scaled::value() const {
  if (mantissa == 0.0) return 0.0;
  const double lv = std::log(std::abs(mantissa)) + log_scale;
  if (lv > 709.78) return mantissa > 0 ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
  return mantissa * std::exp(log_scale);
}

double Scaled::log_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + log_scale;
}

Scaled operator+(const Scaled& a, const Scaled& b) {
  if (a.mantissa == 0.0) return b;
  if (b.mantissa == 0.0) return a;
  const double la = a.log_abs();
  const double lb = b.log_abs();
  const double ref = std::max(la, lb);
  const double ma = a.mantissa * std::exp(a.log_scale - ref);
  const double mb = b.mantissa * std::exp(b.log_scale - ref);
  return {ma + mb, ref};
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive");
  return std::lgamma(x);
}

double digamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("digamma: pole at nonpositive integer");
  double result = 0.0;
  if (x < 0.0) {
    // psi(1 - x) - psi(x) = pi cot(pi x)
    result -= kPi / std::tan(kPi * x);
    x = 1.0 - x;
  }
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double xi2 = 1.0 / (x * x);
  // Bernoulli-number asymptotic series
  const double series =
      xi2 * (1.0 / 12 -
             xi2 * (1.0 / 120 -
                    xi2 * (1.0 / 252 -
                           xi2 * (1.0 / 240 - xi2 * (1.0 / 132 - xi2 * (691.0 / 32760 - xi2 / 12))))));
  return result + std::log(x) - 0.5 / x - series;
}

double log_bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k: x must be positive");
  if (nu < 0.0) throw DomainError("bessel_k: order must be nonnegative");
  const int nl = static_cast<int>(nu + 0.5);
  const double xmu = nu - nl;
  ScaledPair base = bessel_k_base(xmu, x);
  double kmu = base.k_mu;
  double k1 = base.k_mu1;
  double log_scale = base.log_scale;
  const double xi2 = 2.0 / x;
  for (int i = 1; i <= nl; ++i) {
    const double next = (xmu + i) * xi2 * k1 + kmu;
    kmu = k1;
    k1 = next;
    if (std::abs(k1) > 1e250) {
      kmu *= 1e-250;
      k1 *= 1e-250;
      log_scale += 250.0 * std::numbers::ln10;
    }
  }
  return std::log(kmu) + log_scale;
}

double bessel_k(double nu, double x) {
  const double lk = log_bessel_k(nu, x);
  if (lk > 709.78) return std::numeric_limits<double>::infinity();
  const double v = std::exp(lk);
  return v < std::numeric_limits<double>::min() ? 0.0 : v;
}

namespace {

// Power series of J_nu for small x.
double bessel_j_series(double nu, double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  if (nu == 0.0) return sum;
  return std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0)) * sum;
}

// Steed's method (CF1 + CF2 with the Wronskian), x >= 2.
double bessel_j_steed(double nu, double x) {
  const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;
  int isign = 1;
  double h = nu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_j: CF1 did not converge");
  double rjl = isign * kFpMin;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double a = 0.25 - xmu2;
  double p = -0.5 * xi;
  double q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact;
  double ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den;
  double di = -bi / den;
  double dlr = cr * dr - ci * di;
  double dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 2; i <= kMaxIter; ++i) {
    a += 2 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_j: CF2 did not converge");
  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  return rjl1 * (rjmu / rjl);
}

}  // namespace

double bessel_j(double nu, double x) {
  if (x < 0.0) throw DomainError("bessel_j: x must be nonnegative");
  if (nu == -0.5) {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 / (kPi * x)) * std::cos(x);
  }
  if (nu < 0.0) throw DomainError("bessel_j: order must be nonnegative");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x < 2.0) return bessel_j_series(nu, x);
  return bessel_j_steed(nu, x);
}

double omega_d(int d, double x) {
  if (d < 1) throw DomainError("omega_d: dimension must be positive");
  if (x < 0.0) throw DomainError("omega_d: argument must be nonnegative");
  if (d == 1) return std::cos(x);
  if (d == 3) return x == 0.0 ? 1.0 : std::sin(x) / x;
  const double half_d = 0.5 * d;
  if (x < 2.0) {
    // sum_k (-x^2/4)^k / (k! (d/2)_k)
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (k * (half_d + k - 1));
      sum += term;
      if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return sum;
  }
  const double order = half_d - 1.0;
  return std::exp(std::lgamma(half_d) + order * std::log(2.0 / x)) * bessel_j(order, x);
}

double binom(std::uint32_t n, std::uint32_t k) {
  if (k > n) throw DomainError("binom: k must not exceed n");
  if (k > n - k) k = n - k;
  if (n <= 60) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return static_cast<double>(r);
  }
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

}  // namespace maternlab::specfun
