#include "maternlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "maternlab/csv.hpp"
#include "maternlab/errors.hpp"
#include "maternlab/polyharmonic.hpp"
#include "maternlab/rng.hpp"
#include "maternlab/spectral.hpp"

namespace maternlab {

double calibrate_matern_beta(double kappa, int d, double target_range) {
  return solve_scale_for_range(Matern{kappa + 0.5, 1.0}, d, target_range);
}

std::vector<SparsityRow> sparsity_table(const SparsityConfig& cfg, Executor& exec) {
  if (cfg.kappa_list.empty() || cfg.spacing_list.empty()) {
    throw ValidationError({"sparsity: kappa and spacing lists must be nonempty"});
  }
  if (!(cfg.target_range > 0.0)) throw ValidationError({"sparsity: target_range must be positive"});
  if (!(cfg.epsilon > 0.0)) throw ValidationError({"sparsity: epsilon must be positive"});

  std::vector<SparsityRow> rows;
  for (double kappa : cfg.kappa_list) {
    const double beta = calibrate_matern_beta(kappa, cfg.d, cfg.target_range);
    const double mu_min = 0.5 * (cfg.d + 1) + kappa;
    std::vector<double> mus;
    if (cfg.include_boundary_mu) mus.push_back(mu_min);
    for (double mu : cfg.mu_list) {
      if (mu >= mu_min && std::find(mus.begin(), mus.end(), mu) == mus.end()) mus.push_back(mu);
    }
    for (double mu : mus) {
      for (double h : cfg.spacing_list) {
        const SiteSet sites = grid_sites(h, cfg.d);
        SparsityRow row;
        row.kappa = kappa;
        row.mu = mu;
        row.beta = beta;
        row.n = sites.size();
        row.epsilon = cfg.epsilon;
        KernelSpec spec = Matern{kappa + 0.5, beta};
        if (std::isinf(mu)) {
          row.family = "Matern";
          row.support = kMuInfinity;
        } else {
          row.family = "GenWendlandRescaled";
          spec = GenWendlandRescaled{kappa, mu, beta};
          row.support = gw_support_radius(kappa, mu, beta);
        }
        CholFactor chol;
        {
          const SymMatrix cov = build_cov_matrix({spec, 1.0}, sites, exec);
          row.pct_zero_cov = quasi_sparsity(cov, 0.0);
          chol = cholesky(cov);
        }
        const Eigen::MatrixXd prec = invert_spd(chol);
        chol = CholFactor{};
        row.pct_quasi_prec = quasi_sparsity(prec, cfg.epsilon);
        const CholFactor pchol = cholesky(prec);
        // Upper factor R = L^T of the precision: its strict upper part is
        // the strict lower part of L.
        row.pct_quasi_chol = quasi_sparsity(pchol.L, cfg.epsilon, TrianglePart::strict_lower);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string sparsity_csv(const std::vector<SparsityRow>& rows, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"family", "kappa", "mu", "C", "n", "pct_zero_cov", "pct_quasi_prec",
             "pct_quasi_chol", "epsilon"});
  for (const auto& r : rows) {
    w.cell(r.family).cell(r.kappa).cell(r.mu).cell(r.support);
    w.cell(static_cast<long long>(r.n));
    w.cell(r.pct_zero_cov).cell(r.pct_quasi_prec).cell(r.pct_quasi_chol).cell(r.epsilon);
    w.end_row();
  }
  return w.str();
}

namespace {

// Lattice eps * (offset + j) inside [-t, t]^d, first axis slowest.
std::vector<double> lattice_in_box(const std::vector<double>& offset, double eps, double t) {
  const std::size_t d = offset.size();
  std::vector<long long> lo(d), hi(d);
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = static_cast<long long>(std::ceil(-t / eps - offset[k] - 1e-9));
    hi[k] = static_cast<long long>(std::floor(t / eps - offset[k] + 1e-9));
    if (hi[k] < lo[k]) return {};
  }
  std::vector<double> coords;
  std::vector<long long> j = lo;
  while (true) {
    for (std::size_t k = 0; k < d; ++k) {
      coords.push_back(eps * (offset[k] + static_cast<double>(j[k])));
    }
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++j[k] <= hi[k]) break;
      j[k] = lo[k];
      if (k == 0) return coords;
    }
    if (d == 0) return coords;
  }
}

double kriging_variance(const CovarianceModel& model, const SiteSet& sites,
                        std::span<const double> x0) {
  const double p = power_function(model, sites, x0);
  return p * p;
}

}  // namespace

std::vector<ScreeningPoint> screening_ratio(const CovarianceModel& model, int d,
                                            const ScreeningScheme& scheme,
                                            const std::vector<double>& epsilon_list,
                                            Executor& exec) {
  require_valid(model.kernel, d);
  if (scheme.offset.size() != static_cast<std::size_t>(d)) {
    throw ShapeMismatch("screening: offset must have d components");
  }
  if (std::all_of(scheme.offset.begin(), scheme.offset.end(),
                  [](double v) { return v == std::round(v); })) {
    throw ValidationError({"screening: offset must not be a lattice point"});
  }
  if (scheme.near_count == 0) throw EmptyNearSet("screening: near set size must be positive");
  if (!(scheme.truncation > 0.0)) throw ValidationError({"screening: truncation must be positive"});
  for (double eps : epsilon_list) {
    if (!(eps > 0.0)) throw ValidationError({"screening: epsilon values must be positive"});
  }

  std::vector<ScreeningPoint> out(epsilon_list.size());
  const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  exec.parallel_for(epsilon_list.size(), [&](std::size_t e) {
    const double eps = epsilon_list[e];
    const std::vector<double> coords = lattice_in_box(scheme.offset, eps, scheme.truncation);
    const std::size_t n = coords.size() / static_cast<std::size_t>(d);
    if (n == 0) throw EmptyNearSet("screening: no lattice site inside the truncation box");
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        const double c = coords[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
        s += c * c;
      }
      dist[i] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    // Near sites first, then the far set, so that an empty far set repeats
    // the near computation exactly.
    std::vector<double> sorted;
    sorted.reserve(coords.size());
    for (std::size_t i : order) {
      const auto* p = coords.data() + i * static_cast<std::size_t>(d);
      sorted.insert(sorted.end(), p, p + d);
    }
    const SiteSet all(d, std::move(sorted));
    const std::size_t k = std::min(scheme.near_count, n);
    ScreeningPoint pt;
    pt.epsilon = eps;
    pt.near = k;
    pt.far = n - k;
    pt.mse_near = kriging_variance(model, all.prefix(k), origin);
    pt.mse_all = pt.far == 0 ? pt.mse_near : kriging_variance(model, all, origin);
    pt.ratio = pt.mse_near > 0.0 ? pt.mse_all / pt.mse_near : 1.0;
    out[e] = pt;
  });
  return out;
}

std::string screening_csv(const std::vector<ScreeningPoint>& pts, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"epsilon", "near", "far", "mse_near", "mse_all", "ratio"});
  for (const auto& p : pts) {
    w.cell(p.epsilon).cell(static_cast<long long>(p.near)).cell(static_cast<long long>(p.far));
    w.cell(p.mse_near).cell(p.mse_all).cell(p.ratio);
    w.end_row();
  }
  return w.str();
}

namespace {

// Unit vectors: +-1 in d = 1, equally spaced angles in d = 2, a Fibonacci
// lattice on the sphere in d = 3.
std::vector<std::vector<double>> directions(int d, int count) {
  std::vector<std::vector<double>> out;
  if (d == 1) {
    out = {{1.0}, {-1.0}};
  } else if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      out.push_back({std::cos(t), std::sin(t)});
    }
  } else {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(1.0 - z * z);
      std::vector<double> u(static_cast<std::size_t>(d), 0.0);
      u[0] = r * std::cos(golden * k);
      u[1] = r * std::sin(golden * k);
      u[2] = z;
      out.push_back(u);
    }
  }
  return out;
}

}  // namespace

std::vector<SteinPoint> stein_hypothesis_check(const KernelSpec& spec, int d, double radius,
                                               const std::vector<double>& omega_magnitudes,
                                               int n_directions, int radii_count) {
  if (!(radius > 0.0)) throw ValidationError({"stein: R must be positive"});
  if (d < 1 || d > 3) throw DimensionOutOfRange("stein: d must be 1, 2 or 3");
  require_valid(spec, d);
  const auto dirs = directions(d, n_directions);
  std::vector<SteinPoint> out;
  for (double w : omega_magnitudes) {
    const double f0 = spectral_density(spec, d, w);
    double sup = 0.0;
    for (int k = 1; k <= radii_count; ++k) {
      // Midpoints keep |tau| strictly below R.
      const double r = radius * (k - 0.5) / radii_count;
      for (const auto& u : dirs) {
        // |w e1 + r u|
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
          const double c = (j == 0 ? w : 0.0) + r * u[static_cast<std::size_t>(j)];
          s += c * c;
        }
        const double f = spectral_density(spec, d, std::sqrt(s));
        sup = std::max(sup, std::abs(f / f0 - 1.0));
      }
    }
    out.push_back({w, sup});
  }
  return out;
}

std::string stein_csv(const std::vector<SteinPoint>& pts, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"omega", "sup_ratio_deviation"});
  for (const auto& p : pts) {
    w.cell(p.omega).cell(p.sup_ratio_deviation);
    w.end_row();
  }
  return w.str();
}

std::vector<FourierPoint> fourier_points(const KernelSpec& spec, int d,
                                         const std::vector<double>& z_grid, Executor& exec) {
  require_valid(spec, d);
  std::vector<FourierPoint> out(z_grid.size());
  exec.parallel_for(z_grid.size(), [&](std::size_t i) {
    FourierPoint p;
    p.z = z_grid[i];
    p.closed_form = spectral_density(spec, d, p.z);
    p.quadrature = radial_fourier(spec, d, p.z);
    p.rel_error = std::abs(p.quadrature - p.closed_form) / p.closed_form;
    out[i] = p;
  });
  return out;
}

double fourier_consistency(const KernelSpec& spec, int d, const std::vector<double>& z_grid,
                           Executor& exec) {
  double worst = 0.0;
  for (const auto& p : fourier_points(spec, d, z_grid, exec)) worst = std::max(worst, p.rel_error);
  return worst;
}

std::string fourier_csv(const std::vector<FourierPoint>& pts, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"z", "closed_form", "quadrature", "rel_error"});
  for (const auto& p : pts) {
    w.cell(p.z).cell(p.closed_form).cell(p.quadrature).cell(p.rel_error);
    w.end_row();
  }
  return w.str();
}

std::vector<LimitPoint> kernel_limit_suite(const LimitSuiteConfig& cfg, Executor& exec) {
  std::vector<double> grid = cfg.grid;
  if (grid.empty()) {
    for (int i = 0; i <= 600; ++i) grid.push_back(3.0 * i / 600.0);
  }
  const int d = cfg.d;
  const double hd = 0.5 * d;

  struct Task {
    std::string limit, parameter;
    double value;
    KernelSpec a, b;
  };
  std::vector<Task> tasks;
  {
    const double k = cfg.gh_kappa, mu = cfg.gh_mu;
    tasks.push_back({"gh_to_gw", "mu", mu,
                     GaussHypergeometric{hd + 0.5 + k, 0.5 * (d + mu + 1.0) + k,
                                         0.5 * (d + mu) + 1.0 + k, cfg.gh_beta, d},
                     GenWendland{k, mu, cfg.gh_beta}});
  }
  for (double mu : cfg.gw_mu) {
    tasks.push_back({"gw_rescaled_to_matern", "mu", mu,
                     GenWendlandRescaled{cfg.gw_kappa, mu, cfg.gw_beta},
                     Matern{cfg.gw_kappa + 0.5, cfg.gw_beta}});
  }
  for (double eta : cfg.ch_eta) {
    const double beta = 2.0 * std::sqrt(cfg.ch_nu * (eta + 1.0)) * cfg.ch_beta;
    tasks.push_back({"ch_to_matern", "eta", eta, ConfluentHypergeometric{cfg.ch_nu, eta, beta},
                     Matern{cfg.ch_nu, cfg.ch_beta}});
  }
  for (double nu : cfg.gauss_nu) {
    tasks.push_back({"matern_to_gaussian", "nu", nu,
                     Matern{nu, cfg.gauss_alpha / (2.0 * std::sqrt(nu))},
                     GaussianKernel{cfg.gauss_alpha}});
  }
  for (double t : cfg.gh_matern_t) {
    tasks.push_back({"gh_to_matern", "delta_gamma", t,
                     GaussHypergeometric{cfg.gh_matern_kappa, t, t, 2.0 * cfg.gh_matern_alpha * t, d},
                     Matern{cfg.gh_matern_kappa - hd, cfg.gh_matern_alpha}});
  }

  std::vector<LimitPoint> out(tasks.size());
  exec.parallel_for(tasks.size(), [&](std::size_t i) {
    const auto& t = tasks[i];
    out[i] = {t.limit, t.parameter, t.value, kernel_sup_distance(t.a, t.b, d, grid)};
  });
  return out;
}

std::string limits_csv(const std::vector<LimitPoint>& pts, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"limit", "parameter", "value", "sup_distance"});
  for (const auto& p : pts) {
    w.cell(p.limit).cell(p.parameter).cell(p.value).cell(p.sup_distance);
    w.end_row();
  }
  return w.str();
}

SiteSet unit_design(std::size_t n, int d) {
  if (d < 1) throw DomainError("unit_design: d must be positive");
  const auto m = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / d)));
  std::size_t check = 1;
  for (int k = 0; k < d; ++k) check *= m;
  if (check != n || m < 2) {
    throw ValidationError({"unit_design: n = " + std::to_string(n) +
                           " is not a perfect power of d with at least 2 points per axis"});
  }
  std::vector<double> coords;
  coords.reserve(n * static_cast<std::size_t>(d));
  std::vector<std::size_t> j(static_cast<std::size_t>(d), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      j[static_cast<std::size_t>(k)] = rem % m;
      rem /= m;
    }
    for (int k = 0; k < d; ++k) {
      coords.push_back(static_cast<double>(j[static_cast<std::size_t>(k)]) /
                       static_cast<double>(m - 1));
    }
  }
  return SiteSet(d, std::move(coords));
}

McResult ml_microergodic_mc(const McConfig& cfg, Executor& exec) {
  std::vector<std::string> violations;
  if (cfg.reps == 0) violations.push_back("reps must be positive");
  if (cfg.n_list.empty()) violations.push_back("n_list must be nonempty");
  if (cfg.d < 1 || cfg.d > 3) violations.push_back("d must be 1, 2 or 3");
  if (cfg.free.empty()) violations.push_back("at least one free parameter is required");
  if (!violations.empty()) throw ValidationError(violations);
  require_valid(cfg.true_model.kernel, cfg.d);
  const double micro0 = microergodic(cfg.true_model);

  McResult res;
  for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
    const std::size_t n = cfg.n_list[k];
    const SiteSet sites = unit_design(n, cfg.d);
    const auto data = simulate(cfg.true_model, sites, derive_seed(cfg.seed, k), cfg.reps, exec);
    std::vector<McReplicate> reps(cfg.reps);
    exec.parallel_for(cfg.reps, [&](std::size_t r) {
      McReplicate rep;
      rep.rep = r;
      rep.n = n;
      FitSpec spec{cfg.true_model.kernel, cfg.free, {}};
      FitOptions opts = cfg.fit;
      opts.seed = derive_seed(derive_seed(cfg.seed, k), r);
      try {
        const FitResult fit = fit_ml(spec, data[r], opts);
        rep.micro_hat = fit.micro_hat;
        rep.standardized_stat =
            std::sqrt(static_cast<double>(n)) * (fit.micro_hat - micro0) / (std::sqrt(2.0) * micro0);
        rep.failed = !std::isfinite(rep.micro_hat);
      } catch (const Error&) {
        rep.failed = true;
      }
      if (rep.failed) {
        rep.micro_hat = std::numeric_limits<double>::quiet_NaN();
        rep.standardized_stat = std::numeric_limits<double>::quiet_NaN();
      }
      reps[r] = rep;
    });

    McSummary s;
    s.n = n;
    double sum_are = 0.0, sum = 0.0, sum2 = 0.0;
    for (const auto& r : reps) {
      if (r.failed) {
        ++s.failures;
        continue;
      }
      ++s.successes;
      sum_are += std::abs(r.micro_hat - micro0) / micro0;
      sum += r.standardized_stat;
    }
    if (s.successes > 0) {
      const auto m = static_cast<double>(s.successes);
      s.mean_abs_rel_error_micro = sum_are / m;
      s.standardized_mean = sum / m;
      for (const auto& r : reps) {
        if (!r.failed) sum2 += (r.standardized_stat - s.standardized_mean) *
                               (r.standardized_stat - s.standardized_mean);
      }
      s.standardized_sd = s.successes > 1 ? std::sqrt(sum2 / (m - 1.0)) : 0.0;
    } else {
      s.mean_abs_rel_error_micro = s.standardized_mean = s.standardized_sd =
          std::numeric_limits<double>::quiet_NaN();
    }
    res.summary.push_back(s);
    res.replicates.insert(res.replicates.end(), reps.begin(), reps.end());
  }
  return res;
}

std::string mc_csv(const McResult& res, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"rep", "n", "micro_hat", "standardized_stat"});
  for (const auto& r : res.replicates) {
    w.cell(static_cast<long long>(r.rep)).cell(static_cast<long long>(r.n));
    w.cell(r.micro_hat).cell(r.standardized_stat);
    w.end_row();
  }
  return w.str();
}

std::string mc_summary_csv(const McResult& res, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"n", "successes", "failures", "mean_abs_rel_error_micro", "standardized_mean",
             "standardized_sd"});
  for (const auto& s : res.summary) {
    w.cell(static_cast<long long>(s.n)).cell(static_cast<long long>(s.successes));
    w.cell(static_cast<long long>(s.failures));
    w.cell(s.mean_abs_rel_error_micro).cell(s.standardized_mean).cell(s.standardized_sd);
    w.end_row();
  }
  return w.str();
}

double polyharmonic_scale_invariance(double nu, const SiteSet& sites,
                                     const Eigen::VectorXd& values, std::span<const double> x0,
                                     const std::vector<double>& scale_list) {
  const double ref = PolyharmonicInterpolant(nu, sites, values, 1.0)(x0);
  double spread = 0.0;
  for (double s : scale_list) {
    const double v = PolyharmonicInterpolant(nu, sites, values, s)(x0);
    spread = std::max(spread, std::abs(v - ref));
  }
  return spread;
}

std::vector<VecchiaStudyRow> vecchia_ordering_study(const VecchiaStudyConfig& cfg,
                                                    Executor& exec) {
  require_valid(cfg.model.kernel, cfg.d);
  if (cfg.n == 0 || cfg.seeds == 0) throw ValidationError({"vecchia: n and seeds must be positive"});
  const std::size_t per_seed = cfg.orderings.size();
  std::vector<VecchiaStudyRow> out(cfg.seeds * per_seed);
  exec.parallel_for(cfg.seeds, [&](std::size_t s) {
    const std::uint64_t key = derive_seed(cfg.seed, s);
    CounterRng rng(key, 1);
    std::vector<double> coords(cfg.n * static_cast<std::size_t>(cfg.d));
    for (double& c : coords) c = rng.uniform();
    const SiteSet sites(cfg.d, std::move(coords));
    const GpDataset data = simulate(cfg.model, sites, key, 1).front();
    const double exact = log_likelihood(cfg.model, data);
    for (std::size_t o = 0; o < per_seed; ++o) {
      const SiteSet ordered = reorder(sites, cfg.orderings[o], key);
      Eigen::VectorXd z(static_cast<Eigen::Index>(cfg.n));
      for (std::size_t i = 0; i < cfg.n; ++i) {
        z[static_cast<Eigen::Index>(i)] =
            data.values[static_cast<Eigen::Index>(ordered.source_index()[i])];
      }
      const double v = vecchia_loglik(cfg.model, GpDataset{ordered, z, 0}, cfg.m);
      out[s * per_seed + o] = {s, cfg.orderings[o], exact, v, std::abs(v - exact)};
    }
  });
  return out;
}

std::string vecchia_csv(const std::vector<VecchiaStudyRow>& rows, const std::string& header_line) {
  csv::Writer w(header_line);
  w.columns({"seed_index", "ordering", "exact", "vecchia", "abs_error"});
  for (const auto& r : rows) {
    w.cell(static_cast<long long>(r.seed_index)).cell(to_string(r.ordering));
    w.cell(r.exact).cell(r.vecchia).cell(r.abs_error);
    w.end_row();
  }
  return w.str();
}

}  // namespace maternlab
