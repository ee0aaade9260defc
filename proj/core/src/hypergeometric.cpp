#include <cmath>
#include <limits>
#include <numbers>

#include "maternlab/errors.hpp"
#include "maternlab/quadrature.hpp"
#include "maternlab/specfun.hpp"
#include "specfun_internal.hpp"

namespace maternlab::specfun {

namespace {

using detail::is_nonpositive_integer;
using detail::lgamma_signed;

constexpr double kRescale = 1e250;
constexpr double kLogRescale = 250.0 * std::numbers::ln10;
constexpr double kNearInteger = 1e-6;

Scaled negate(Scaled s) { return {-s.mantissa, s.log_scale}; }
Scaled scale_by(Scaled s, double f) { return {s.mantissa * f, s.log_scale}; }

// Sums 1 + sum_k prod_{j<k} ratio(j), rescaling to stay inside the double range.
template <class Ratio>
Scaled sum_series(Ratio ratio, double log_prefactor, const AccuracyPolicy& policy,
                  const char* who) {
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  int quiet = 0;
  for (int k = 0; k < policy.max_terms; ++k) {
    const double r = ratio(k);
    term *= r;
    sum += term;
    if (term == 0.0) return {sum, log_scale + log_prefactor};
    if (std::abs(term) > kRescale || std::abs(sum) > kRescale) {
      term /= kRescale;
      sum /= kRescale;
      log_scale += kLogRescale;
    }
    if (std::abs(r) < 1.0 && std::abs(term) <= policy.rel_tol * 1e-2 * std::abs(sum)) {
      if (++quiet >= 2) return {sum, log_scale + log_prefactor};
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError(std::string(who) + ": series did not converge within max_terms");
}

// log|Gamma(x)| accumulated with sign; returns false when 1/Gamma(x) vanishes.
struct GammaRatio {
  double log_abs = 0.0;
  int sign = 1;
  bool zero = false;

  void mul(double x) {
    if (is_nonpositive_integer(x)) throw DomainError("gamma pole in hypergeometric prefactor");
    int s = 1;
    log_abs += lgamma_signed(x, s);
    sign *= s;
  }
  void div(double x) {
    if (is_nonpositive_integer(x)) {
      zero = true;
      return;
    }
    int s = 1;
    log_abs -= lgamma_signed(x, s);
    sign *= s;
  }
};

Scaled f21_series(double a, double b, double c, double z, double lp, const AccuracyPolicy& p) {
  return sum_series(
      [&](int k) { return (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z; }, lp, p, "gauss_2f1");
}

// Logarithmic case c = a + b + m with integer m >= 0; w = 1 - z > 0 unless m >= 1.
Scaled f21_log_case(double a, double b, int m, double w, double lp, const AccuracyPolicy& p) {
  const double c = a + b + m;
  const double log_w = std::log(w);
  if (m == 0) {
    if (w == 0.0) throw DomainError("gauss_2f1: series diverges at z = 1 when c = a + b");
    GammaRatio g;
    g.mul(c);
    g.div(a);
    g.div(b);
    double coef = 1.0;
    double psi1 = digamma(1.0);
    double psia = digamma(a);
    double psib = digamma(b);
    double sum = coef * (2.0 * psi1 - psia - psib - log_w);
    double log_scale = 0.0;
    int quiet = 0;
    for (int n = 0; n < p.max_terms; ++n) {
      coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
      psi1 += 1.0 / (n + 1.0);
      psia += 1.0 / (a + n);
      psib += 1.0 / (b + n);
      const double t = coef * (2.0 * psi1 - psia - psib - log_w);
      sum += t;
      if (std::abs(sum) > kRescale || std::abs(coef) > kRescale) {
        coef /= kRescale;
        sum /= kRescale;
        log_scale += kLogRescale;
      }
      if (coef == 0.0 || std::abs(t) <= p.rel_tol * 1e-2 * std::abs(sum)) {
        if (coef == 0.0 || ++quiet >= 2) {
          return {g.sign * sum, log_scale + g.log_abs + lp};
        }
      } else {
        quiet = 0;
      }
    }
    throw ConvergenceError("gauss_2f1: logarithmic series did not converge");
  }

  // Finite part.
  GammaRatio ga;
  ga.mul(static_cast<double>(m));
  ga.mul(c);
  ga.div(a + m);
  ga.div(b + m);
  Scaled part_a{0.0, 0.0};
  if (!ga.zero) {
    double t = 1.0;
    double s = 1.0;
    for (int n = 0; n + 1 < m; ++n) {
      t *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w;
      s += t;
    }
    part_a = {ga.sign * s, ga.log_abs + lp};
  }
  if (w == 0.0) return part_a;

  // Infinite logarithmic part.
  GammaRatio gb;
  gb.mul(c);
  gb.div(a);
  gb.div(b);
  if (gb.zero) return part_a;
  double coef = 1.0;  // (a+m)_n (b+m)_n / (n! (n+m)!) without the 1/m! factor
  double psi_n1 = digamma(1.0);
  double psi_nm1 = digamma(m + 1.0);
  double psi_a = digamma(a + m);
  double psi_b = digamma(b + m);
  double sum = log_w - psi_n1 - psi_nm1 + psi_a + psi_b;
  double log_scale = 0.0;
  int quiet = 0;
  bool done = false;
  for (int n = 0; n < p.max_terms; ++n) {
    coef *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w;
    psi_n1 += 1.0 / (n + 1.0);
    psi_nm1 += 1.0 / (n + m + 1.0);
    psi_a += 1.0 / (a + m + n);
    psi_b += 1.0 / (b + m + n);
    const double t = coef * (log_w - psi_n1 - psi_nm1 + psi_a + psi_b);
    sum += t;
    if (std::abs(sum) > kRescale || std::abs(coef) > kRescale) {
      coef /= kRescale;
      sum /= kRescale;
      log_scale += kLogRescale;
    }
    if (coef == 0.0 || std::abs(t) <= p.rel_tol * 1e-2 * std::abs(sum)) {
      if (coef == 0.0 || ++quiet >= 2) {
        done = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (!done) throw ConvergenceError("gauss_2f1: logarithmic series did not converge");
  // -(-1)^m w^m Gamma(c) / (Gamma(a) Gamma(b) m!) * sum
  const double sign = (m % 2 == 0) ? -1.0 : 1.0;
  const double log_pref = m * log_w + gb.log_abs - std::lgamma(m + 1.0) + log_scale + lp;
  return part_a + Scaled{sign * gb.sign * sum, log_pref};
}

// z -> 1 - z connection formula for non-integer m = c - a - b.
Scaled f21_connection(double a, double b, double c, double w, double lp, const AccuracyPolicy& p) {
  const double m = c - a - b;
  Scaled out{0.0, 0.0};
  GammaRatio g1;
  g1.mul(c);
  g1.mul(m);
  g1.div(c - a);
  g1.div(c - b);
  if (!g1.zero) {
    const Scaled s = f21_series(a, b, 1.0 - m, w, 0.0, p);
    out = out + Scaled{g1.sign * s.mantissa, s.log_scale + g1.log_abs + lp};
  }
  if (w == 0.0) {
    if (m < 0.0) throw DomainError("gauss_2f1: series diverges at z = 1 when c - a - b < 0");
    return out;
  }
  GammaRatio g2;
  g2.mul(c);
  g2.mul(-m);
  g2.div(a);
  g2.div(b);
  if (!g2.zero) {
    const Scaled s = f21_series(c - a, c - b, 1.0 + m, w, 0.0, p);
    out = out + Scaled{g2.sign * s.mantissa, s.log_scale + g2.log_abs + m * std::log(w) + lp};
  }
  return out;
}

Scaled f21_reflected(double a, double b, double c, double w, double lp, const AccuracyPolicy& p) {
  const double m = c - a - b;
  const double mi = std::round(m);
  const double delta = m - mi;
  if (std::abs(delta) > kNearInteger) return f21_connection(a, b, c, w, lp, p);

  auto integer_case = [&](double cc) -> Scaled {
    const int mm = static_cast<int>(std::round(cc - a - b));
    if (mm >= 0) return f21_log_case(a, b, mm, w, lp, p);
    // Euler: F(a,b;c;z) = w^(c-a-b) F(c-a, c-b; c; z)
    if (w == 0.0) throw DomainError("gauss_2f1: series diverges at z = 1 when c - a - b < 0");
    return f21_log_case(cc - a, cc - b, -mm, w, lp + mm * std::log(w), p);
  };
  if (delta == 0.0) return integer_case(c);

  // c - a - b within kNearInteger of an integer: first-order expansion in c
  // about the integer point, derivative by central difference of the
  // connection formula at a safe distance.
  constexpr double h = 1e-3;
  const double c0 = a + b + mi;
  const Scaled base = integer_case(c0);
  const Scaled up = f21_connection(a, b, c0 + h, w, lp, p);
  const Scaled down = f21_connection(a, b, c0 - h, w, lp, p);
  const Scaled slope = scale_by(up + negate(down), delta / (2.0 * h));
  return base + slope;
}

void check_c(double c) {
  if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c must not be a nonpositive integer");
}

Scaled f21_dispatch(double a, double b, double c, double z, double w, double lp,
                    const AccuracyPolicy& p) {
  check_c(c);
  if (z == 0.0) return {1.0, lp};
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b) || z <= 0.5) {
    return f21_series(a, b, c, z, lp, p);
  }
  return f21_reflected(a, b, c, w, lp, p);
}

}  // namespace

double gauss_2f1_series(double a, double b, double c, double z, const AccuracyPolicy& policy) {
  check_c(c);
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("gauss_2f1: z must lie in [0, 1)");
  return f21_series(a, b, c, z, 0.0, policy).value();
}

double gauss_2f1_reflected(double a, double b, double c, double z, const AccuracyPolicy& policy) {
  check_c(c);
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("gauss_2f1: z must lie in [0, 1)");
  return f21_reflected(a, b, c, 1.0 - z, 0.0, policy).value();
}

Scaled gauss_2f1_scaled(double a, double b, double c, double z, double log_prefactor,
                        const AccuracyPolicy& policy) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("gauss_2f1: z must lie in [0, 1)");
  return f21_dispatch(a, b, c, z, 1.0 - z, log_prefactor, policy);
}

double gauss_2f1(double a, double b, double c, double z, const AccuracyPolicy& policy) {
  return gauss_2f1_scaled(a, b, c, z, 0.0, policy).value();
}

Scaled gauss_2f1_complement(double a, double b, double c, double w, double log_prefactor,
                            const AccuracyPolicy& policy) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("gauss_2f1: complement w must lie in [0, 1]");
  return f21_dispatch(a, b, c, 1.0 - w, w, log_prefactor, policy);
}

namespace {

Scaled kummer_series(double a, double b, double z, double lp, const AccuracyPolicy& p) {
  if (is_nonpositive_integer(b)) throw DomainError("kummer_m: b must not be a nonpositive integer");
  if (z == 0.0) return {1.0, lp};
  return sum_series([&](int k) { return (a + k) / ((b + k) * (k + 1.0)) * z; }, lp, p,
                    "kummer_m");
}

}  // namespace

double kummer_m(double a, double b, double z, const AccuracyPolicy& policy) {
  if (z < 0.0) throw DomainError("kummer_m: z must be nonnegative");
  return kummer_series(a, b, z, 0.0, policy).value();
}

Scaled tricomi_u_kummer(double a, double b, double z, double log_prefactor,
                        const AccuracyPolicy& policy) {
  if (std::abs(b - std::round(b)) < 1e-12) {
    throw DomainError("tricomi_u: M-combination undefined for integer b");
  }
  if (!(z > 0.0)) throw DomainError("tricomi_u: M-combination needs z > 0");
  Scaled out{0.0, 0.0};
  GammaRatio g1;
  g1.mul(1.0 - b);
  g1.div(a - b + 1.0);
  if (!g1.zero) {
    const Scaled m1 = kummer_series(a, b, z, 0.0, policy);
    out = out + Scaled{g1.sign * m1.mantissa, m1.log_scale + g1.log_abs + log_prefactor};
  }
  GammaRatio g2;
  g2.mul(b - 1.0);
  g2.div(a);
  if (!g2.zero) {
    const Scaled m2 = kummer_series(a - b + 1.0, 2.0 - b, z, 0.0, policy);
    out = out + Scaled{g2.sign * m2.mantissa,
                       m2.log_scale + g2.log_abs + (1.0 - b) * std::log(z) + log_prefactor};
  }
  return out;
}

Scaled tricomi_u_integral(double a, double b, double z, double log_prefactor,
                          const AccuracyPolicy& policy) {
  if (!(a > 0.0)) throw DomainError("tricomi_u: integral representation needs a > 0");
  if (z < 0.0 || (z == 0.0 && !(b < 1.0))) {
    throw DomainError("tricomi_u: integral representation needs z > 0 or b < 1");
  }
  // U(a,b,z) = 1/Gamma(a) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt
  auto log_f = [=](double t) {
    return (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t) - z * t;
  };
  const double tol = std::max(policy.rel_tol * 0.1, 1e-14);
  const Scaled integral = quad::exp_sinh_log(log_f, tol, 14);
  return {integral.mantissa, integral.log_scale - std::lgamma(a) + log_prefactor};
}

Scaled tricomi_u_scaled(double a, double b, double z, double log_prefactor,
                        const AccuracyPolicy& policy) {
  if (!(a > 0.0)) throw DomainError("tricomi_u: a must be positive");
  if (z < 0.0) throw DomainError("tricomi_u: z must be nonnegative");
  if (z == 0.0) {
    if (!(b < 1.0)) throw DomainError("tricomi_u: U(a, b, 0) is finite only for b < 1");
    // U(a, b, 0) = Gamma(1-b) / Gamma(a-b+1)
    return {1.0, std::lgamma(1.0 - b) - std::lgamma(a - b + 1.0) + log_prefactor};
  }
  const bool near_integer_b = std::abs(b - std::round(b)) <= kNearInteger;
  if (!near_integer_b && z <= 1.0 && a * z <= 2.0) {
    return tricomi_u_kummer(a, b, z, log_prefactor, policy);
  }
  return tricomi_u_integral(a, b, z, log_prefactor, policy);
}

double tricomi_u(double a, double b, double z, const AccuracyPolicy& policy) {
  return tricomi_u_scaled(a, b, z, 0.0, policy).value();
}

}  // namespace maternlab::specfun
