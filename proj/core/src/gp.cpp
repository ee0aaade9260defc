#include "maternlab/gp.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"
#include "maternlab/errors.hpp"
#include "maternlab/rng.hpp"

namespace maternlab {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

std::size_t find_site(const SiteSet& sites, std::span<const double> x0) {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto p = sites.point(i);
    if (std::equal(p.begin(), p.end(), x0.begin())) return i;
  }
  return sites.size();
}

double loglik_from_factor(const CholFactor& chol, const Eigen::VectorXd& z) {
  const Eigen::VectorXd w = solve_lower(chol, z);
  const auto n = static_cast<double>(z.size());
  return -0.5 * (chol.logdet + w.squaredNorm() + n * kLog2Pi);
}

}  // namespace

std::vector<GpDataset> simulate(const CovarianceModel& model, const SiteSet& sites,
                                std::uint64_t seed, std::size_t replicates, Executor& exec) {
  const CholFactor chol = cholesky(build_cov_matrix(model, sites, exec));
  const auto n = static_cast<Eigen::Index>(sites.size());
  std::vector<GpDataset> out(replicates);
  exec.parallel_for(replicates, [&](std::size_t r) {
    CounterRng rng(seed, r);
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = rng.normal();
    out[r] = GpDataset{sites, chol.L.triangularView<Eigen::Lower>() * u, r};
  });
  return out;
}

Prediction krige(const CovarianceModel& model, const GpDataset& data, std::span<const double> x0) {
  const auto& sites = data.sites;
  if (x0.size() != static_cast<std::size_t>(sites.dim())) {
    throw ShapeMismatch("krige: location dimension differs from the site set");
  }
  if (data.values.size() != static_cast<Eigen::Index>(sites.size())) {
    throw ShapeMismatch("krige: one value per site required");
  }
  const std::size_t hit = find_site(sites, x0);
  if (hit < sites.size()) return {data.values[static_cast<Eigen::Index>(hit)], 0.0};
  if (sites.size() == 0) return {0.0, model.sigma2};
  const CholFactor chol = cholesky(build_cov_matrix(model, sites));
  const Eigen::VectorXd c = cross_cov(model, sites, x0);
  const Eigen::VectorXd w = solve_lower(chol, c);
  const Eigen::VectorXd zw = solve_lower(chol, data.values);
  const double mean = w.dot(zw);
  const double var = std::max(0.0, model.sigma2 - w.squaredNorm());
  return {mean, var};
}

double power_function(const CovarianceModel& model, const SiteSet& sites,
                      std::span<const double> x0) {
  if (sites.size() == 0) return std::sqrt(model.sigma2);
  GpDataset data{sites, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sites.size())), 0};
  return std::sqrt(krige(model, data, x0).variance);
}

double interpolant_norm2(const CovarianceModel& model, const GpDataset& data) {
  const CovarianceModel unit{model.kernel, 1.0};
  const CholFactor chol = cholesky(build_cov_matrix(unit, data.sites));
  return solve_lower(chol, data.values).squaredNorm();
}

double log_likelihood(const CovarianceModel& model, const GpDataset& data) {
  if (data.values.size() != static_cast<Eigen::Index>(data.sites.size())) {
    throw ShapeMismatch("log_likelihood: one value per site required");
  }
  return loglik_from_factor(cholesky(build_cov_matrix(model, data.sites)), data.values);
}

ConcentratedLik concentrated_loglik(const KernelSpec& kernel, const GpDataset& data,
                                    JitterPolicy jitter) {
  if (data.values.size() != static_cast<Eigen::Index>(data.sites.size())) {
    throw ShapeMismatch("concentrated_loglik: one value per site required");
  }
  if (data.values.size() == 0 || data.values.cwiseAbs().maxCoeff() == 0.0) {
    throw FlatData("concentrated_loglik: data vector is identically zero");
  }
  const CholFactor chol = cholesky(build_cov_matrix({kernel, 1.0}, data.sites), jitter);
  const auto n = static_cast<double>(data.values.size());
  const double q = solve_lower(chol, data.values).squaredNorm();
  const double s2 = q / n;
  // log|s2 R| + Z^T R^{-1} Z / s2 = n log s2 + log|R| + n
  const double value = -0.5 * (n * std::log(s2) + chol.logdet + n + n * kLog2Pi);
  return {value, s2};
}

double microergodic(const CovarianceModel& model) {
  const auto& k = model.kernel;
  if (const auto* m = std::get_if<Matern>(&k.value)) {
    return model.sigma2 / std::pow(m->alpha, 2.0 * m->nu);
  }
  if (const auto* g = std::get_if<GenWendland>(&k.value)) {
    return model.sigma2 / std::pow(g->beta, 2.0 * g->kappa + 1.0);
  }
  if (const auto* g = std::get_if<GenWendlandRescaled>(&k.value)) {
    const double c = gw_support_radius(g->kappa, g->mu, g->beta);
    return model.sigma2 / std::pow(c, 2.0 * g->kappa + 1.0);
  }
  if (const auto* c = std::get_if<ConfluentHypergeometric>(&k.value)) {
    return model.sigma2 * std::exp(std::lgamma(c->nu + c->eta) - std::lgamma(c->eta)) /
           std::pow(c->beta, 2.0 * c->nu);
  }
  throw UnsupportedFamily("microergodic: not defined for " + k.family());
}

EquivalenceResult equivalence_check(const CovarianceModel& a, const CovarianceModel& b, int d) {
  if (d >= 4) throw DimensionOutOfRange("equivalence_check: conditions hold for d = 1, 2, 3 only");
  if (d < 1) throw DomainError("equivalence_check: d must be positive");
  const bool a_matern = a.kernel.is<Matern>();
  const bool b_matern = b.kernel.is<Matern>();
  if (!a_matern && !b_matern) {
    throw UnsupportedPair("equivalence_check: one model must be Matern");
  }
  const CovarianceModel& m0 = a_matern ? a : b;
  const CovarianceModel& m1 = a_matern ? b : a;
  const auto& mat = m0.kernel.as<Matern>();
  const double lhs = m0.sigma2 * std::pow(mat.alpha, -2.0 * mat.nu);
  EquivalenceResult out;
  double rhs;
  bool side_ok = true;
  if (const auto* other = std::get_if<Matern>(&m1.kernel.value)) {
    if (std::abs(other->nu - mat.nu) > 1e-12) {
      side_ok = false;
      out.notes.push_back("smoothness differs (nu = " + std::to_string(mat.nu) + " vs " +
                          std::to_string(other->nu) + ")");
    }
    rhs = m1.sigma2 * std::pow(other->alpha, -2.0 * other->nu);
  } else if (m1.kernel.is<GenWendland>() || m1.kernel.is<GenWendlandRescaled>()) {
    double kappa, mu, beta;
    if (const auto* g = std::get_if<GenWendland>(&m1.kernel.value)) {
      kappa = g->kappa;
      mu = g->mu;
      beta = g->beta;
    } else {
      const auto& g2 = m1.kernel.as<GenWendlandRescaled>();
      kappa = g2.kappa;
      mu = g2.mu;
      beta = gw_support_radius(g2.kappa, g2.mu, g2.beta);
    }
    if (std::abs(mat.nu - (kappa + 0.5)) > 1e-12) {
      side_ok = false;
      out.notes.push_back("nu = kappa + 1/2 required");
    }
    if (!(mu > d + kappa + 0.5)) {
      side_ok = false;
      out.notes.push_back("mu > d + kappa + 1/2 required");
    }
    rhs = std::exp(std::lgamma(2.0 * kappa + mu + 1.0) - std::lgamma(mu)) * m1.sigma2 *
          std::pow(beta, -(1.0 + 2.0 * kappa));
  } else if (const auto* c = std::get_if<ConfluentHypergeometric>(&m1.kernel.value)) {
    if (std::abs(c->nu - mat.nu) > 1e-12) {
      side_ok = false;
      out.notes.push_back("smoothness differs");
    }
    if (!(c->eta >= 0.5 * d)) {
      side_ok = false;
      out.notes.push_back("eta >= d/2 required");
    }
    rhs = std::exp(std::lgamma(c->nu + c->eta) - std::lgamma(c->eta)) * m1.sigma2 *
          std::pow(0.5 * c->beta * c->beta, -c->nu);
  } else {
    throw UnsupportedPair("equivalence_check: unsupported pair Matern/" + m1.kernel.family());
  }
  out.condition_residual = std::abs(lhs - rhs) / std::abs(lhs);
  out.equivalent = side_ok && out.condition_residual < 1e-10;
  return out;
}

MisspecifiedMse misspecified_mse(const CovarianceModel& true_model,
                                 const CovarianceModel& working_model, const SiteSet& sites,
                                 std::span<const double> x0) {
  MisspecifiedMse out;
  if (sites.size() == 0) {
    out.mse_under_true_with_working_pred = true_model.sigma2;
    out.mse_oracle = true_model.sigma2;
    out.mse_believed_by_working = working_model.sigma2;
    out.ratio_variance_assessment = working_model.sigma2 / true_model.sigma2;
    return out;
  }
  const SymMatrix s0 = build_cov_matrix(true_model, sites);
  const CholFactor ch0 = cholesky(s0);
  const CholFactor ch1 = cholesky(build_cov_matrix(working_model, sites));
  const Eigen::VectorXd c0 = cross_cov(true_model, sites, x0);
  const Eigen::VectorXd c1 = cross_cov(working_model, sites, x0);
  const Eigen::VectorXd lambda1 = solve(ch1, c1);
  const double mse_w = true_model.sigma2 - 2.0 * lambda1.dot(c0) + lambda1.dot(s0 * lambda1);
  const double mse_o = true_model.sigma2 - solve_lower(ch0, c0).squaredNorm();
  const double believed = working_model.sigma2 - solve_lower(ch1, c1).squaredNorm();
  out.mse_under_true_with_working_pred = std::max(0.0, mse_w);
  out.mse_oracle = std::max(0.0, mse_o);
  out.mse_believed_by_working = std::max(0.0, believed);
  out.ratio_efficiency = out.mse_oracle > 0.0
                             ? out.mse_under_true_with_working_pred / out.mse_oracle
                             : 1.0;
  out.ratio_variance_assessment =
      out.mse_under_true_with_working_pred > 0.0
          ? out.mse_believed_by_working / out.mse_under_true_with_working_pred
          : 1.0;
  return out;
}

std::string to_json(const Prediction& p) {
  nlohmann::json j;
  j["mean"] = p.mean;
  j["variance"] = p.variance;
  return j.dump();
}

std::string to_json(const FitResult& r) {
  nlohmann::json j;
  j["theta_hat"] = nlohmann::json::parse(kernel_to_json(r.theta_hat));
  j["loglik"] = r.loglik;
  j["sigma2_hat"] = r.sigma2_hat;
  j["micro_hat"] = std::isfinite(r.micro_hat) ? nlohmann::json(r.micro_hat) : nlohmann::json();
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  return j.dump();
}

}  // namespace maternlab
