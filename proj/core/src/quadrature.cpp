#include "maternlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "maternlab/errors.hpp"

namespace maternlab::quad {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct Node {
  double weight;
  double from_a;
  double to_b;
};

// Abscissa t of the tanh-sinh map onto [a, b] with half-width `half`.
Node tanh_sinh_node(double t, double half) {
  const double s = kHalfPi * std::sinh(t);
  const double ch = std::cosh(s);
  // 1 - tanh(s) = exp(-s)/cosh(s), 1 + tanh(s) = exp(s)/cosh(s)
  const double to_b = half * std::exp(-s) / ch;
  const double from_a = half * std::exp(s) / ch;
  const double weight = half * kHalfPi * std::cosh(t) / (ch * ch);
  return {weight, from_a, to_b};
}

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkPanel {
  double kronrod;
  double gauss;
  double abs_kronrod;  // Kronrod rule applied to |f|, for the roundoff floor
};

GkPanel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  double ka = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    const double s = f1 + f2;
    k += kWgk[j] * s;
    ka += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {k * h, g * h, ka * std::abs(h)};
}

void gk_recurse(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double rel_tol, int depth, Result& acc) {
  const auto panel = gk15(f, a, b);
  acc.evaluations += 15;
  const double err = std::abs(panel.kronrod - panel.gauss);
  // Differences at the roundoff level of the panel cannot be reduced by
  // further bisection.
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * panel.abs_kronrod;
  if (err <= std::max({abs_tol, rel_tol * std::abs(panel.kronrod), floor}) || depth <= 0) {
    acc.value += panel.kronrod;
    acc.error += err;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_recurse(f, a, m, 0.5 * abs_tol, rel_tol, depth - 1, acc);
  gk_recurse(f, m, b, 0.5 * abs_tol, rel_tol, depth - 1, acc);
}

}  // namespace

Result tanh_sinh(const EndpointIntegrand& f, double a, double b, double rel_tol, int max_level) {
  if (!(b > a)) return {};
  const double half = 0.5 * (b - a);
  constexpr double kTMax = 6.5;
  const double tiny = std::numeric_limits<double>::min() * 1e10;

  auto eval = [&](double t) -> double {
    const Node n = tanh_sinh_node(t, half);
    if (n.weight == 0.0 || n.from_a < tiny || n.to_b < tiny) return 0.0;
    const double x = n.from_a < n.to_b ? a + n.from_a : b - n.to_b;
    const double fx = f(x, n.from_a, n.to_b);
    if (!std::isfinite(fx)) return 0.0;
    return n.weight * fx;
  };

  Result res;
  double h = 0.5;
  double sum = eval(0.0);
  int evals = 1;
  for (double t = h; t <= kTMax; t += h) {
    sum += eval(t) + eval(-t);
    evals += 2;
  }
  double estimate = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (double t = h; t <= kTMax; t += 2.0 * h) {
      added += eval(t) + eval(-t);
      evals += 2;
    }
    sum += added;
    const double next = h * sum;
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && diff <= rel_tol * std::abs(next)) {
      res.error = diff;
      break;
    }
    res.error = diff;
    if (level >= 3 && next == 0.0) break;
  }
  res.value = estimate;
  res.evaluations = evals;
  return res;
}

specfun::Scaled exp_sinh_log(const std::function<double(double)>& log_f, double rel_tol,
                             int max_level) {
  constexpr double kTMin = -6.5;
  constexpr double kTMax = 6.7;
  std::vector<double> terms;
  terms.reserve(1 << 12);

  auto log_term = [&](double t) -> double {
    const double s = kHalfPi * std::sinh(t);
    if (s > 700.0 || s < -700.0) return -std::numeric_limits<double>::infinity();
    const double x = std::exp(s);
    const double lf = log_f(x);
    if (std::isnan(lf)) return -std::numeric_limits<double>::infinity();
    return lf + s + std::log(kHalfPi * std::cosh(t));
  };

  auto log_sum = [](const std::vector<double>& v, double& max_out) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    max_out = m;
    if (!std::isfinite(m)) return 0.0;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return s;
  };

  double h = 0.5;
  for (double t = kTMin; t <= kTMax + 1e-12; t += h) terms.push_back(log_term(t));
  double m = 0.0;
  double s = log_sum(terms, m);
  specfun::Scaled prev{h * s, m};
  if (!std::isfinite(m)) return {0.0, 0.0};

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = kTMin + h; t <= kTMax + 1e-12; t += 2.0 * h) terms.push_back(log_term(t));
    s = log_sum(terms, m);
    specfun::Scaled next{h * s, m};
    const double ratio = std::exp(prev.log_scale - next.log_scale) * prev.mantissa / next.mantissa;
    prev = next;
    if (level >= 3 && std::abs(ratio - 1.0) <= rel_tol) return next;
  }
  throw ConvergenceError("exp-sinh quadrature did not converge");
}

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_depth) {
  Result acc;
  if (a == b) return acc;
  gk_recurse(f, a, b, abs_tol, rel_tol, max_depth, acc);
  return acc;
}

double wynn_epsilon(const std::vector<double>& s) {
  const std::size_t n = s.size();
  if (n == 0) return 0.0;
  if (n < 3) return s.back();
  // eps[i][k] = epsilon_{k-1}^{(i)}; epsilon_{-1} = 0, epsilon_0 = s_i
  std::vector<std::vector<double>> eps(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) eps[i][1] = s[i];
  double best = s.back();
  double best_delta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t i = 0; i + k - 1 < n; ++i) {
      const double diff = eps[i + 1][k - 1] - eps[i][k - 1];
      const double below = eps[i + 1][k - 2];
      if (diff == 0.0) {
        eps[i][k] = std::numeric_limits<double>::infinity();
      } else {
        eps[i][k] = below + 1.0 / diff;
      }
    }
    // only even-order columns estimate the limit
    if (k % 2 == 1) {
      const std::size_t i = n - k;
      const double est = eps[i][k];
      if (std::isfinite(est)) {
        const double delta = std::abs(est - eps[i + 1][k - 2]);
        if (delta <= best_delta) {
          best_delta = delta;
          best = est;
        }
      }
    }
  }
  return best;
}

}  // namespace maternlab::quad
