#include "maternlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "maternlab/errors.hpp"
#include "maternlab/quadrature.hpp"
#include "maternlab/specfun.hpp"

namespace maternlab {

namespace {

constexpr double kHalfIntegerTol = 1e-9;
constexpr int kClosedFormMaxK = 60;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void need_positive(std::vector<std::string>& out, const char* family, const char* name,
                   double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    out.push_back(std::string(family) + ": " + name + " > 0 required (" + name + " = " + fmt(v) +
                  ")");
  }
}

// Nearest k with |nu - 1/2 - k| < tol, or -1.
int half_integer_index(double nu) {
  const double k = std::round(nu - 0.5);
  if (k < 0.0 || std::abs(nu - 0.5 - k) >= kHalfIntegerTol) return -1;
  return static_cast<int>(k);
}

double matern_closed(int k, double t) {
  // e^{-t} sum_{i=0}^k (k+i)!/(2k)! C(k,i) (2t)^{k-i}
  const double lg2k = std::lgamma(2.0 * k + 1.0);
  const double log2t = t > 0.0 ? std::log(2.0 * t) : 0.0;
  double sum = 0.0;
  for (int i = k; i >= 0; --i) {
    if (t == 0.0 && i < k) break;
    const double lc = std::lgamma(k + i + 1.0) - lg2k + std::lgamma(k + 1.0) -
                      std::lgamma(i + 1.0) - std::lgamma(k - i + 1.0);
    sum += std::exp(lc + (k - i) * log2t - t);
  }
  return sum;
}

double matern_bessel(double nu, double t) {
  if (t == 0.0) return 1.0;
  const double lv = (1.0 - nu) * std::numbers::ln2 - std::lgamma(nu) + nu * std::log(t) +
                    specfun::log_bessel_k(nu, t);
  return std::min(1.0, std::exp(lv));
}

// (1 - r)^p computed as exp(p log1p(-r)).
double one_minus_pow(double r, double p) {
  if (r >= 1.0) return 0.0;
  return std::exp(p * std::log1p(-r));
}

double gw_closed(int kappa, double mu, double r) {
  switch (kappa) {
    case 0:
      return one_minus_pow(r, mu);
    case 1:
      return one_minus_pow(r, mu + 1.0) * (1.0 + (mu + 1.0) * r);
    default:
      return one_minus_pow(r, mu + 2.0) *
             (1.0 + (mu + 2.0) * r + (mu * mu + 4.0 * mu + 3.0) * r * r / 3.0);
  }
}

// int_r^1 u (u^2 - r^2)^(kappa-1) (1-u)^mu du / B(2 kappa, mu + 1)
double gw_integral(double kappa, double mu, double r) {
  if (r >= 1.0) return 0.0;
  const double log_beta =
      std::lgamma(2.0 * kappa) + std::lgamma(mu + 1.0) - std::lgamma(2.0 * kappa + mu + 1.0);
  auto f = [&](double u, double from_a, double to_b) {
    const double lf = std::log(u) + (kappa - 1.0) * (std::log(from_a) + std::log(u + r)) +
                      mu * std::log(to_b) - log_beta;
    return std::exp(lf);
  };
  const auto res = quad::tanh_sinh(f, r, 1.0, 1e-14, 12);
  return std::min(1.0, res.value);
}

double gw_eval(double kappa, double mu, double beta, double x) {
  const double r = x / beta;
  if (r >= 1.0) return 0.0;
  const double ki = std::round(kappa);
  if (ki == kappa && ki <= 2.0) return gw_closed(static_cast<int>(ki), mu, r);
  return gw_integral(kappa, mu, r);
}

double gh_eval(const GaussHypergeometric& g, double x) {
  const double r = x / g.beta;
  if (r >= 1.0) return 0.0;
  if (x == 0.0) return 1.0;
  const double hd = 0.5 * g.d_ref;
  const double a = g.delta - g.kappa;
  const double b = g.gamma_p - g.kappa;
  const double c = a + g.gamma_p - hd;
  const double lp = std::lgamma(g.delta - hd) + std::lgamma(g.gamma_p - hd) - std::lgamma(c) -
                    std::lgamma(g.kappa - hd) + (c - 1.0) * std::log((1.0 - r) * (1.0 + r));
  return specfun::gauss_2f1_complement(a, b, c, r * r, lp).value();
}

double ch_eval(const ConfluentHypergeometric& c, double x) {
  if (x == 0.0) return 1.0;
  const double r = x / c.beta;
  const double lp = std::lgamma(c.nu + c.eta) - std::lgamma(c.nu);
  return std::min(1.0, specfun::tricomi_u_scaled(c.eta, 1.0 - c.nu, c.nu * r * r, lp).value());
}

double psi_gneiting(double a, double lambda, double t) { return std::pow(1.0 + a * t, lambda); }

double euclid(std::span<const double> x, std::span<const double> y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

std::string KernelSpec::family() const {
  return std::visit(
      Overloaded{[](const Matern&) { return std::string("Matern"); },
                 [](const GaussianKernel&) { return std::string("GaussianKernel"); },
                 [](const Askey&) { return std::string("Askey"); },
                 [](const GenWendland&) { return std::string("GenWendland"); },
                 [](const GenWendlandRescaled&) { return std::string("GenWendlandRescaled"); },
                 [](const GaussHypergeometric&) { return std::string("GaussHypergeometric"); },
                 [](const ConfluentHypergeometric&) {
                   return std::string("ConfluentHypergeometric");
                 },
                 [](const Polyharmonic&) { return std::string("Polyharmonic"); },
                 [](const Tapered&) { return std::string("Tapered"); },
                 [](const SpaceTimeGneiting&) { return std::string("SpaceTimeGneiting"); },
                 [](const PaciorekNS&) { return std::string("PaciorekNS"); }},
      value);
}

std::vector<std::string> validate(const KernelSpec& spec, int d) {
  std::vector<std::string> out;
  if (d < 1) {
    out.push_back("dimension d >= 1 required (d = " + std::to_string(d) + ")");
    return out;
  }
  const std::string ds = std::to_string(d);
  std::visit(
      Overloaded{
          [&](const Matern& m) {
            need_positive(out, "Matern", "nu", m.nu);
            need_positive(out, "Matern", "alpha", m.alpha);
          },
          [&](const GaussianKernel& g) { need_positive(out, "GaussianKernel", "alpha", g.alpha); },
          [&](const Askey& a) {
            need_positive(out, "Askey", "mu", a.mu);
            need_positive(out, "Askey", "beta", a.beta);
            if (!(a.mu >= 0.5 * (d + 1))) {
              out.push_back("Askey: mu >= (d+1)/2 required (mu = " + fmt(a.mu) + ", d = " + ds +
                            ")");
            }
          },
          [&](const auto& g)
            requires std::is_same_v<std::decay_t<decltype(g)>, GenWendland> ||
                     std::is_same_v<std::decay_t<decltype(g)>, GenWendlandRescaled>
          {
            const char* name =
                std::is_same_v<std::decay_t<decltype(g)>, GenWendland> ? "GenWendland"
                                                                        : "GenWendlandRescaled";
            if (!(g.kappa >= 0.0)) {
              out.push_back(std::string(name) + ": kappa >= 0 required (kappa = " +
                            fmt(g.kappa) + ")");
            }
            need_positive(out, name, "mu", g.mu);
            need_positive(out, name, "beta", g.beta);
            if (!(g.mu >= 0.5 * (d + 1) + g.kappa)) {
              out.push_back(std::string(name) + ": mu >= (d+1)/2 + kappa required (mu = " +
                            fmt(g.mu) + ", kappa = " + fmt(g.kappa) + ", d = " + ds + ")");
            }
          },
          [&](const GaussHypergeometric& g) {
            need_positive(out, "GaussHypergeometric", "kappa", g.kappa);
            need_positive(out, "GaussHypergeometric", "delta", g.delta);
            need_positive(out, "GaussHypergeometric", "gamma_p", g.gamma_p);
            need_positive(out, "GaussHypergeometric", "beta", g.beta);
            if (g.d_ref != d) {
              out.push_back("GaussHypergeometric: d_ref must equal d (d_ref = " +
                            std::to_string(g.d_ref) + ", d = " + ds + ")");
            }
            if (!(g.kappa > 0.5 * d)) {
              out.push_back("GaussHypergeometric: kappa > d/2 required (kappa = " +
                            fmt(g.kappa) + ", d = " + ds + ")");
            }
            if (!(2.0 * (g.delta - g.kappa) * (g.gamma_p - g.kappa) >= g.kappa)) {
              out.push_back("GaussHypergeometric: 2(delta-kappa)(gamma_p-kappa) >= kappa required");
            }
            if (!(2.0 * (g.delta + g.gamma_p) >= 6.0 * g.kappa + 1.0)) {
              out.push_back("GaussHypergeometric: 2(delta+gamma_p) >= 6 kappa + 1 required");
            }
          },
          [&](const ConfluentHypergeometric& c) {
            need_positive(out, "ConfluentHypergeometric", "nu", c.nu);
            need_positive(out, "ConfluentHypergeometric", "eta", c.eta);
            need_positive(out, "ConfluentHypergeometric", "beta", c.beta);
          },
          [&](const Polyharmonic& p) {
            if (p.d_ref != d) {
              out.push_back("Polyharmonic: d_ref must equal d (d_ref = " +
                            std::to_string(p.d_ref) + ", d = " + ds + ")");
            }
            if (!(2.0 * p.nu > d)) {
              out.push_back("Polyharmonic: 2 nu > d required (nu = " + fmt(p.nu) + ", d = " + ds +
                            ")");
            }
          },
          [&](const Tapered& t) {
            if (!t.base || !t.taper) {
              out.push_back("Tapered: base and taper must both be set");
              return;
            }
            for (const auto& v : validate(*t.base, d)) out.push_back("base: " + v);
            for (const auto& v : validate(*t.taper, d)) out.push_back("taper: " + v);
            if (!support_radius(*t.taper)) {
              out.push_back("Tapered: taper must be compactly supported (got " +
                            t.taper->family() + ")");
            }
          },
          [&](const SpaceTimeGneiting& s) {
            need_positive(out, "SpaceTimeGneiting", "nu", s.nu);
            need_positive(out, "SpaceTimeGneiting", "alpha", s.alpha);
            need_positive(out, "SpaceTimeGneiting", "psi_a", s.psi_a);
            if (!(s.psi_lambda > 0.0 && s.psi_lambda <= 1.0)) {
              out.push_back("SpaceTimeGneiting: psi_lambda in (0, 1] required (psi_lambda = " +
                            fmt(s.psi_lambda) + ")");
            }
          },
          [&](const PaciorekNS& p) {
            need_positive(out, "PaciorekNS", "nu", p.nu);
            need_positive(out, "PaciorekNS", "alpha", p.alpha);
            if (!p.anisotropy_field) out.push_back("PaciorekNS: anisotropy_field must be set");
          }},
      spec.value);
  return out;
}

void require_valid(const KernelSpec& spec, int d) {
  auto v = validate(spec, d);
  if (!v.empty()) throw ValidationError(std::move(v));
}

double matern_correlation(double nu, double alpha, double x, MaternPath path) {
  if (!(nu > 0.0) || !(alpha > 0.0)) throw DomainError("matern: nu and alpha must be positive");
  if (x < 0.0) throw DomainError("matern: distance must be nonnegative");
  const double t = x / alpha;
  const int k = half_integer_index(nu);
  switch (path) {
    case MaternPath::closed_form:
      if (k < 0) throw DomainError("matern: closed form needs a half-integer nu");
      return matern_closed(k, t);
    case MaternPath::bessel:
      return matern_bessel(nu, t);
    case MaternPath::automatic:
      break;
  }
  if (k >= 0 && k <= kClosedFormMaxK) return matern_closed(k, t);
  return matern_bessel(nu, t);
}

double gw_hypergeometric(double kappa, double mu, double beta, double x) {
  const double r = x / beta;
  if (r >= 1.0) return 0.0;
  if (kappa == 0.0) return one_minus_pow(r, mu);
  // Gamma(k)Gamma(2k+mu+1) / (Gamma(2k)Gamma(k+mu+1) 2^(mu+1)) (1-r^2)^(k+mu)
  //   2F1(mu/2, (mu+1)/2; k+mu+1; 1-r^2)
  const double lp = std::lgamma(kappa) + std::lgamma(2.0 * kappa + mu + 1.0) -
                    std::lgamma(2.0 * kappa) - std::lgamma(kappa + mu + 1.0) -
                    (mu + 1.0) * std::numbers::ln2 +
                    (kappa + mu) * std::log((1.0 - r) * (1.0 + r));
  return specfun::gauss_2f1_complement(0.5 * mu, 0.5 * (mu + 1.0), kappa + mu + 1.0, r * r, lp)
      .value();
}

double gw_support_radius(double kappa, double mu, double beta) {
  return beta *
         std::exp((std::lgamma(mu + 2.0 * kappa + 1.0) - std::lgamma(mu)) / (1.0 + 2.0 * kappa));
}

double gw_rescaled_correlation(double kappa, double mu, double beta, int d, double x) {
  require_valid(GenWendlandRescaled{kappa, mu, beta}, d);
  return gw_eval(kappa, mu, gw_support_radius(kappa, mu, beta), x);
}

double polyharmonic_value(double nu, int d, double x) {
  const double p = 2.0 * nu - d;
  if (!(p > 0.0)) throw DomainError("polyharmonic: 2 nu > d required");
  if (x < 0.0) throw DomainError("polyharmonic: distance must be nonnegative");
  if (x == 0.0) return 0.0;
  const double sign = (static_cast<long long>(std::floor(nu - 0.5 * d)) + 1) % 2 == 0 ? 1.0 : -1.0;
  const bool even = p == std::round(p) && static_cast<long long>(p) % 2 == 0;
  const double v = std::pow(x, p);
  return sign * (even ? v * std::log(x) : v);
}

namespace {

double evaluate(const KernelSpec& spec, int d, double x) {
  return std::visit(
      Overloaded{
          [&](const Matern& m) { return matern_correlation(m.nu, m.alpha, x); },
          [&](const GaussianKernel& g) {
            const double t = x / g.alpha;
            return std::exp(-t * t);
          },
          [&](const Askey& a) { return one_minus_pow(x / a.beta, a.mu); },
          [&](const GenWendland& g) { return gw_eval(g.kappa, g.mu, g.beta, x); },
          [&](const GenWendlandRescaled& g) {
            return gw_eval(g.kappa, g.mu, gw_support_radius(g.kappa, g.mu, g.beta), x);
          },
          [&](const GaussHypergeometric& g) { return gh_eval(g, x); },
          [&](const ConfluentHypergeometric& c) { return ch_eval(c, x); },
          [&](const Polyharmonic& p) { return polyharmonic_value(p.nu, d, x); },
          [&](const Tapered& t) {
            const double tv = evaluate(*t.taper, d, x);
            return tv == 0.0 ? 0.0 : tv * evaluate(*t.base, d, x);
          },
          [&](const SpaceTimeGneiting& s) { return matern_correlation(s.nu, s.alpha, x); },
          [&](const PaciorekNS&) -> double {
            throw UnsupportedFamily("PaciorekNS is nonstationary; use point_correlation");
          }},
      spec.value);
}

}  // namespace

double correlation(const KernelSpec& spec, int d, double x) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("correlation: distance must be nonnegative");
  require_valid(spec, d);
  return evaluate(spec, d, x);
}

double point_correlation(const KernelSpec& spec, std::span<const double> x,
                         std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeMismatch("point_correlation: dimension mismatch");
  const auto n = x.size();
  if (const auto* s = std::get_if<SpaceTimeGneiting>(&spec.value)) {
    if (n < 2) throw ShapeMismatch("SpaceTimeGneiting needs at least one space and one time axis");
    const double u = x[n - 1] - y[n - 1];
    return spacetime_gneiting(s->nu, s->alpha, s->psi_a, s->psi_lambda,
                              static_cast<int>(n - 1), euclid(x, y, n - 1), std::abs(u));
  }
  if (const auto* p = std::get_if<PaciorekNS>(&spec.value)) {
    return paciorek_ns(p->nu, p->alpha, p->anisotropy_field, x, y);
  }
  return evaluate(spec, static_cast<int>(n), euclid(x, y, n));
}

std::optional<double> support_radius(const KernelSpec& spec) {
  return std::visit(
      Overloaded{[](const Askey& a) -> std::optional<double> { return a.beta; },
                 [](const GenWendland& g) -> std::optional<double> { return g.beta; },
                 [](const GenWendlandRescaled& g) -> std::optional<double> {
                   return gw_support_radius(g.kappa, g.mu, g.beta);
                 },
                 [](const GaussHypergeometric& g) -> std::optional<double> { return g.beta; },
                 [](const Tapered& t) -> std::optional<double> {
                   auto a = t.taper ? support_radius(*t.taper) : std::nullopt;
                   auto b = t.base ? support_radius(*t.base) : std::nullopt;
                   if (a && b) return std::min(*a, *b);
                   return a ? a : b;
                 },
                 [](const auto&) -> std::optional<double> { return std::nullopt; }},
      spec.value);
}

KernelSpec taper(const KernelSpec& base, const KernelSpec& taper_spec) {
  if (!support_radius(taper_spec)) {
    throw ValidationError({"Tapered: taper must be compactly supported (got " +
                           taper_spec.family() + ")"});
  }
  return Tapered{std::make_shared<const KernelSpec>(base),
                 std::make_shared<const KernelSpec>(taper_spec)};
}

double spacetime_gneiting(double nu, double alpha, double psi_a, double psi_lambda, int d,
                          double x, double u) {
  require_valid(SpaceTimeGneiting{nu, alpha, psi_a, psi_lambda}, d);
  if (x < 0.0) throw DomainError("spacetime_gneiting: distance must be nonnegative");
  const double psi = psi_gneiting(psi_a, psi_lambda, u * u);
  return matern_correlation(nu, alpha, x / psi) / psi;
}

double paciorek_ns(double nu, double alpha, const AnisotropyField& anisotropy_field,
                   std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeMismatch("paciorek_ns: dimension mismatch");
  if (!anisotropy_field) throw DomainError("paciorek_ns: anisotropy field not set");
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::MatrixXd sx = anisotropy_field(x);
  const Eigen::MatrixXd sy = anisotropy_field(y);
  if (sx.rows() != n || sx.cols() != n || sy.rows() != n || sy.cols() != n) {
    throw ShapeMismatch("paciorek_ns: anisotropy matrix has wrong shape");
  }
  const Eigen::MatrixXd avg = 0.5 * (sx + sy);
  Eigen::LLT<Eigen::MatrixXd> lx(sx), ly(sy), la(avg);
  if (lx.info() != Eigen::Success || ly.info() != Eigen::Success ||
      la.info() != Eigen::Success) {
    throw NotPositiveDefinite("paciorek_ns: anisotropy matrix is not positive definite");
  }
  auto logdet = [](const Eigen::LLT<Eigen::MatrixXd>& l) {
    return 2.0 * l.matrixL().toDenseMatrix().diagonal().array().log().sum();
  };
  Eigen::VectorXd diff(n);
  for (Eigen::Index i = 0; i < n; ++i) diff[i] = x[i] - y[i];
  const double q = diff.dot(la.solve(diff));
  const double log_pref = 0.25 * logdet(lx) + 0.25 * logdet(ly) - 0.5 * logdet(la);
  return std::exp(log_pref) * matern_correlation(nu, alpha, std::sqrt(std::max(q, 0.0)));
}

double practical_range(const KernelSpec& spec, int d, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("practical_range: level must be in (0, 1)");
  require_valid(spec, d);
  if (spec.is<Polyharmonic>() || spec.is<PaciorekNS>()) {
    throw UnsupportedFamily("practical_range: not defined for " + spec.family());
  }
  double lo = 0.0;
  double hi;
  if (auto s = support_radius(spec)) {
    hi = *s;
  } else {
    hi = scale_of(spec);
    int doublings = 0;
    while (evaluate(spec, d, hi) > level) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 200) throw BracketError("practical_range: no crossing found");
    }
  }
  if (evaluate(spec, d, hi) > level) throw BracketError("practical_range: no crossing found");
  for (int it = 0; it < 400 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(spec, d, mid) > level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double scale_of(const KernelSpec& spec) {
  return std::visit(
      Overloaded{[](const Matern& m) { return m.alpha; },
                 [](const GaussianKernel& g) { return g.alpha; },
                 [](const Askey& a) { return a.beta; },
                 [](const GenWendland& g) { return g.beta; },
                 [](const GenWendlandRescaled& g) { return g.beta; },
                 [](const GaussHypergeometric& g) { return g.beta; },
                 [](const ConfluentHypergeometric& c) { return c.beta; },
                 [](const SpaceTimeGneiting& s) { return s.alpha; },
                 [](const PaciorekNS& p) { return p.alpha; },
                 [&](const auto&) -> double {
                   throw UnsupportedFamily("no scale parameter for " + spec.family());
                 }},
      spec.value);
}

KernelSpec with_scale(const KernelSpec& spec, double scale) {
  return std::visit(
      Overloaded{[&](Matern m) -> KernelSpec { m.alpha = scale; return m; },
                 [&](GaussianKernel g) -> KernelSpec { g.alpha = scale; return g; },
                 [&](Askey a) -> KernelSpec { a.beta = scale; return a; },
                 [&](GenWendland g) -> KernelSpec { g.beta = scale; return g; },
                 [&](GenWendlandRescaled g) -> KernelSpec { g.beta = scale; return g; },
                 [&](GaussHypergeometric g) -> KernelSpec { g.beta = scale; return g; },
                 [&](ConfluentHypergeometric c) -> KernelSpec { c.beta = scale; return c; },
                 [&](SpaceTimeGneiting s) -> KernelSpec { s.alpha = scale; return s; },
                 [&](PaciorekNS p) -> KernelSpec { p.alpha = scale; return p; },
                 [&](const auto&) -> KernelSpec {
                   throw UnsupportedFamily("no scale parameter for " + spec.family());
                 }},
      spec.value);
}

double solve_scale_for_range(const KernelSpec& spec, int d, double target_range, double level) {
  if (!(target_range > 0.0)) throw DomainError("solve_scale_for_range: target must be positive");
  // Every supported family is phi(x / scale), so the range is linear in the scale.
  const double unit_range = practical_range(with_scale(spec, 1.0), d, level);
  return target_range / unit_range;
}

double kernel_sup_distance(const KernelSpec& a, const KernelSpec& b, int d,
                           const std::vector<double>& grid) {
  require_valid(a, d);
  require_valid(b, d);
  double worst = 0.0;
  for (double x : grid) worst = std::max(worst, std::abs(evaluate(a, d, x) - evaluate(b, d, x)));
  return worst;
}

double correlation_unchecked(const KernelSpec& spec, int d, double x) {
  return evaluate(spec, d, x);
}

}  // namespace maternlab

namespace maternlab {

namespace {

using Field = std::pair<const char*, double*>;

std::vector<Field> fields_of(KernelSpec& spec) {
  return std::visit(
      Overloaded{
          [](Matern& k) -> std::vector<Field> { return {{"nu", &k.nu}, {"alpha", &k.alpha}}; },
          [](GaussianKernel& k) -> std::vector<Field> { return {{"alpha", &k.alpha}}; },
          [](Askey& k) -> std::vector<Field> { return {{"mu", &k.mu}, {"beta", &k.beta}}; },
          [](GenWendland& k) -> std::vector<Field> {
            return {{"kappa", &k.kappa}, {"mu", &k.mu}, {"beta", &k.beta}};
          },
          [](GenWendlandRescaled& k) -> std::vector<Field> {
            return {{"kappa", &k.kappa}, {"mu", &k.mu}, {"beta", &k.beta}};
          },
          [](GaussHypergeometric& k) -> std::vector<Field> {
            return {{"kappa", &k.kappa}, {"delta", &k.delta}, {"gamma_p", &k.gamma_p},
                    {"beta", &k.beta}};
          },
          [](ConfluentHypergeometric& k) -> std::vector<Field> {
            return {{"nu", &k.nu}, {"eta", &k.eta}, {"beta", &k.beta}};
          },
          [](Polyharmonic& k) -> std::vector<Field> { return {{"nu", &k.nu}}; },
          [](Tapered&) -> std::vector<Field> { return {}; },
          [](SpaceTimeGneiting& k) -> std::vector<Field> {
            return {{"nu", &k.nu}, {"alpha", &k.alpha}, {"psi_a", &k.psi_a},
                    {"psi_lambda", &k.psi_lambda}};
          },
          [](PaciorekNS& k) -> std::vector<Field> { return {{"nu", &k.nu}, {"alpha", &k.alpha}}; }},
      spec.value);
}

}  // namespace

std::vector<std::string> parameter_names(const KernelSpec& spec) {
  KernelSpec copy = spec;
  std::vector<std::string> out;
  for (const auto& f : fields_of(copy)) out.emplace_back(f.first);
  return out;
}

double get_parameter(const KernelSpec& spec, const std::string& name) {
  KernelSpec copy = spec;
  for (const auto& f : fields_of(copy)) {
    if (name == f.first) return *f.second;
  }
  throw DomainError(spec.family() + " has no parameter '" + name + "'");
}

KernelSpec set_parameter(const KernelSpec& spec, const std::string& name, double value) {
  KernelSpec copy = spec;
  for (const auto& f : fields_of(copy)) {
    if (name == f.first) {
      *f.second = value;
      return copy;
    }
  }
  throw DomainError(spec.family() + " has no parameter '" + name + "'");
}

}  // namespace maternlab
