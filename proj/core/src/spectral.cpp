#include "maternlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "maternlab/errors.hpp"
#include "maternlab/quadrature.hpp"
#include "maternlab/specfun.hpp"

namespace maternlab {

namespace {

constexpr double kPi = std::numbers::pi;

struct Panel {
  double value = 0.0;
  double magnitude = 0.0;  // integral of |g|
};

Panel integrate_piece(const std::function<double(double)>& f, double a, double b,
                      double global_floor, const RadialOptions& opts) {
  // A coarse pass over |f| sets the absolute tolerance for this piece.
  const auto coarse =
      quad::gauss_kronrod([&](double u) { return std::abs(f(u)); }, a, b, 0.0, 1.0, 0);
  const double mag = std::abs(coarse.value);
  if (mag == 0.0) return {};
  // Pieces that are negligible against the integral so far need no more
  // accuracy than that; the depth cap bounds work on noisy integrands.
  const double tol = std::max(opts.rel_tol * mag * 1e-2, global_floor);
  const auto r = quad::gauss_kronrod(f, a, b, tol, opts.rel_tol, 16);
  return {r.value, mag};
}

}  // namespace

double radial_integral(const std::function<double(double)>& g, int d, double z,
                       double length_scale, std::optional<double> support,
                       const RadialOptions& opts) {
  if (d < 1) throw DomainError("radial_integral: d must be positive");
  if (z < 0.0) throw DomainError("radial_integral: frequency must be nonnegative");
  if (!(length_scale > 0.0)) throw DomainError("radial_integral: length scale must be positive");

  auto f = [&](double u) {
    const double gu = g(u);
    if (gu == 0.0) return 0.0;
    const double w = z == 0.0 ? 1.0 : specfun::omega_d(d, u * z);
    return (d == 1 ? 1.0 : std::pow(u, d - 1)) * w * gu;
  };

  const double piece = 0.5 * length_scale;
  // Breakpoint k >= 1 of the oscillation: McMahon estimate of the k-th zero of J_{d/2-1}.
  const double order = 0.5 * d - 1.0;
  auto zero_at = [&](int k) { return (k + 0.5 * order - 0.25) * kPi / z; };

  double sum = 0.0;
  double max_mag = 0.0;
  double lo = 0.0;
  int quiet = 0;
  std::vector<double> partial;
  double last_wynn = std::numeric_limits<double>::quiet_NaN();
  int wynn_agree = 0;
  const double growth_start = 16.0 * length_scale;

  for (int k = 1; k <= opts.max_panels; ++k) {
    double hi;
    if (z > 0.0) {
      hi = zero_at(k);
      if (hi <= lo) hi = lo + kPi / z;
    } else {
      // Non-oscillatory: widths grow geometrically once past the main mass.
      hi = lo < growth_start ? lo + piece : 2.0 * lo;
    }
    bool last = false;
    if (support && hi >= *support) {
      hi = *support;
      last = true;
    }
    // Subdivide so no piece is wider than half the length scale near the origin.
    const int pieces = lo < growth_start
                           ? std::max(1, static_cast<int>(std::ceil((hi - lo) / piece)))
                           : 1;
    Panel panel;
    for (int j = 0; j < pieces; ++j) {
      const double a = lo + (hi - lo) * j / pieces;
      const double b = j + 1 == pieces ? hi : lo + (hi - lo) * (j + 1) / pieces;
      const Panel p = integrate_piece(f, a, b, 1e-16 * max_mag, opts);
      panel.value += p.value;
      panel.magnitude += p.magnitude;
    }
    sum += panel.value;
    max_mag = std::max(max_mag, panel.magnitude);
    lo = hi;
    if (last) return sum;

    partial.push_back(sum);
    if (panel.magnitude <= 1e-17 * std::max(std::abs(sum), 1e-300) &&
        panel.magnitude <= 1e-14 * max_mag) {
      if (++quiet >= 3) return sum;
    } else {
      quiet = 0;
    }
    if (panel.magnitude == 0.0 && max_mag > 0.0 && k > 8) {
      if (++quiet >= 3) return sum;
    }
    // Oscillatory algebraic tail: extrapolate partial sums at the zeros.
    if (z > 0.0 && k >= 48 && k % 8 == 0) {
      const std::size_t take = std::min<std::size_t>(partial.size(), 41);
      const std::vector<double> tail(partial.end() - static_cast<std::ptrdiff_t>(take),
                                     partial.end());
      const double est = quad::wynn_epsilon(tail);
      const double tol = std::max(1e-11 * std::abs(est), 1e-16 * max_mag);
      if (std::isfinite(last_wynn) && std::abs(est - last_wynn) <= tol) {
        if (++wynn_agree >= 2) return est;
      } else {
        wynn_agree = 0;
      }
      last_wynn = est;
    }
    if (z == 0.0 && !std::isfinite(lo)) break;
  }
  throw ConvergenceError("radial_integral: no convergence (z = " + std::to_string(z) +
                         ", partial sum = " + std::to_string(sum) + ")");
}

double spectral_density(const KernelSpec& spec, int d, double z) {
  if (z < 0.0) throw DomainError("spectral_density: frequency must be nonnegative");
  require_valid(spec, d);
  const double hd = 0.5 * d;
  if (const auto* m = std::get_if<Matern>(&spec.value)) {
    // Gamma(nu + d/2) / (pi^(d/2) Gamma(nu)) alpha^d / (1 + alpha^2 z^2)^(nu + d/2)
    const double az = m->alpha * z;
    const double lv = std::lgamma(m->nu + hd) - hd * std::log(kPi) - std::lgamma(m->nu) +
                      d * std::log(m->alpha) - (m->nu + hd) * std::log1p(az * az);
    return std::exp(lv);
  }
  if (const auto* g = std::get_if<GaussianKernel>(&spec.value)) {
    // alpha^d / (2^d pi^(d/2)) exp(-alpha^2 z^2 / 4)
    const double az = g->alpha * z;
    return std::pow(g->alpha / (2.0 * std::sqrt(kPi)), d) * std::exp(-0.25 * az * az);
  }
  throw UnsupportedFamily("spectral_density: no closed form for " + spec.family() +
                          "; use radial_fourier");
}

double radial_fourier(const KernelSpec& spec, int d, double z, const RadialOptions& opts) {
  require_valid(spec, d);
  if (spec.is<Polyharmonic>() || spec.is<PaciorekNS>()) {
    throw UnsupportedFamily("radial_fourier: not defined for " + spec.family());
  }
  const auto support = support_radius(spec);
  const double length = std::min(practical_range(spec, d), support.value_or(1e300));
  auto g = [&](double u) { return correlation_unchecked(spec, d, u); };
  const double hd = 0.5 * d;
  // 1 / ((2 pi)^(d/2) 2^(d/2-1) Gamma(d/2))
  const double norm =
      std::exp(-hd * std::log(2.0 * kPi) - (hd - 1.0) * std::numbers::ln2 - std::lgamma(hd));
  return norm * radial_integral(g, d, z, length, support, opts);
}

double inverse_radial_fourier(const std::function<double(double)>& density, int d, double x,
                              double frequency_scale, const RadialOptions& opts) {
  const double hd = 0.5 * d;
  // (2 pi)^(d/2) 2^(1-d/2) / Gamma(d/2)
  const double norm =
      std::exp(hd * std::log(2.0 * kPi) + (1.0 - hd) * std::numbers::ln2 - std::lgamma(hd));
  return norm * radial_integral(density, d, x, frequency_scale, std::nullopt, opts);
}

}  // namespace maternlab
