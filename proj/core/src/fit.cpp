#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "maternlab/errors.hpp"
#include "maternlab/gp.hpp"
#include "maternlab/rng.hpp"

namespace maternlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Objective {
  const FitSpec& spec;
  const GpDataset& data;
  const FitOptions& opts;
  std::vector<double> log_lo, log_hi;

  KernelSpec kernel_at(const std::vector<double>& y) const {
    KernelSpec k = spec.init;
    for (std::size_t i = 0; i < y.size(); ++i) k = set_parameter(k, spec.free[i], std::exp(y[i]));
    return k;
  }

  // Concentrated log-likelihood; any failure or bound violation maps to -inf.
  double operator()(const std::vector<double>& y) const {
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!(y[i] >= log_lo[i] && y[i] <= log_hi[i])) return kNegInf;
    }
    try {
      const KernelSpec k = kernel_at(y);
      if (!validate(k, data.sites.dim()).empty()) return kNegInf;
      const double v = concentrated_loglik(k, data, opts.jitter).value;
      return std::isfinite(v) ? v : kNegInf;
    } catch (const FlatData&) {
      throw;
    } catch (const Error&) {
      return kNegInf;
    }
  }
};

struct SimplexResult {
  std::vector<double> y;
  double value = kNegInf;
  int iterations = 0;
  bool converged = false;
};

double diameter(const std::vector<std::vector<double>>& pts) {
  double dmax = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < pts[0].size(); ++j) {
      const double t = pts[i][j] - pts[0][j];
      s += t * t;
    }
    dmax = std::max(dmax, std::sqrt(s));
  }
  return dmax;
}

// Maximizes f by Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2). Initial simplex steps 0.5 in log space.
SimplexResult nelder_mead(const Objective& f, std::vector<double> y0, const FitOptions& opts) {
  const std::size_t k = y0.size();
  std::vector<std::vector<double>> pts(k + 1, y0);
  std::vector<double> vals(k + 1);
  for (std::size_t i = 0; i < k; ++i) pts[i + 1][i] += 0.5;
  for (std::size_t i = 0; i <= k; ++i) vals[i] = f(pts[i]);

  auto point_along = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> p(k);
    for (std::size_t j = 0; j < k; ++j) p[j] = c[j] + t * (w[j] - c[j]);
    return p;
  };

  SimplexResult res;
  std::vector<std::size_t> idx(k + 1);
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] > vals[b];
    });
    {
      std::vector<std::vector<double>> p2;
      std::vector<double> v2;
      for (auto i : idx) {
        p2.push_back(pts[i]);
        v2.push_back(vals[i]);
      }
      pts.swap(p2);
      vals.swap(v2);
    }
    if (std::isfinite(vals[0]) && diameter(pts) < opts.tolerance) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) centroid[j] += pts[i][j] / static_cast<double>(k);
    }
    const auto& worst = pts[k];
    const auto refl = point_along(centroid, worst, -1.0);
    const double fr = f(refl);
    if (fr > vals[0]) {
      const auto expd = point_along(centroid, worst, -2.0);
      const double fe = f(expd);
      if (fe > fr) {
        pts[k] = expd;
        vals[k] = fe;
      } else {
        pts[k] = refl;
        vals[k] = fr;
      }
      continue;
    }
    if (fr > vals[k - 1]) {
      pts[k] = refl;
      vals[k] = fr;
      continue;
    }
    const bool outside = fr > vals[k];
    const auto contr = outside ? point_along(centroid, worst, -0.5) : point_along(centroid, worst, 0.5);
    const double fc = f(contr);
    if (fc > std::max(fr, vals[k]) || (!outside && fc > vals[k])) {
      pts[k] = contr;
      vals[k] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= k; ++i) {
      pts[i] = point_along(pts[0], pts[i], 0.5);
      vals[i] = f(pts[i]);
    }
  }
  const auto best = std::max_element(vals.begin(), vals.end()) - vals.begin();
  res.y = pts[static_cast<std::size_t>(best)];
  res.value = vals[static_cast<std::size_t>(best)];
  return res;
}

}  // namespace

FitResult fit_ml(const FitSpec& spec, const GpDataset& data, const FitOptions& opts) {
  if (spec.free.empty()) throw NoFreeParameters("fit_ml: no free parameters");
  if (opts.starts < 1) throw DomainError("fit_ml: starts must be positive");
  require_valid(spec.init, data.sites.dim());
  const auto names = parameter_names(spec.init);

  Objective f{spec, data, opts, {}, {}};
  std::vector<double> y0;
  std::vector<std::string> violations;
  for (const auto& name : spec.free) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      violations.push_back("unknown free parameter '" + name + "' for " + spec.init.family());
      continue;
    }
    ParamBounds b;
    if (auto it = spec.bounds.find(name); it != spec.bounds.end()) b = it->second;
    const double v = get_parameter(spec.init, name);
    if (!(b.lower > 0.0 && b.upper > b.lower)) {
      violations.push_back("bounds for '" + name + "' must satisfy 0 < lower < upper");
    } else if (!(v >= b.lower && v <= b.upper)) {
      violations.push_back("initial '" + name + "' outside its bounds");
    }
    f.log_lo.push_back(std::log(b.lower));
    f.log_hi.push_back(std::log(b.upper));
    y0.push_back(std::log(v));
  }
  if (!violations.empty()) throw ValidationError(violations);

  SimplexResult best;
  int failed = 0;
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<double> y = y0;
    if (s > 0) {
      CounterRng rng(opts.seed, static_cast<std::uint64_t>(s));
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double shift = opts.start_jitter * (2.0 * rng.uniform() - 1.0);
        y[i] = std::clamp(y[i] + shift, f.log_lo[i], f.log_hi[i]);
      }
    }
    if (!std::isfinite(f(y))) {
      ++failed;
      continue;
    }
    SimplexResult r = nelder_mead(f, y, opts);
    if (!std::isfinite(r.value)) {
      ++failed;
      continue;
    }
    if (!std::isfinite(best.value) || r.value > best.value) best = std::move(r);
  }
  if (!std::isfinite(best.value)) {
    throw AllStartsFailed("fit_ml: all " + std::to_string(opts.starts) + " starts failed");
  }

  FitResult out;
  out.theta_hat = f.kernel_at(best.y);
  const auto c = concentrated_loglik(out.theta_hat, data, opts.jitter);
  out.loglik = c.value;
  out.sigma2_hat = c.sigma2_hat;
  try {
    out.micro_hat = microergodic({out.theta_hat, out.sigma2_hat});
  } catch (const UnsupportedFamily&) {
    out.micro_hat = std::numeric_limits<double>::quiet_NaN();
  }
  out.iterations = best.iterations;
  out.converged = best.converged;
  out.failed_starts = failed;
  return out;
}

}  // namespace maternlab
