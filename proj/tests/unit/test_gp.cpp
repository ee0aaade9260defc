#include <cmath>
#include <numbers>

#include <doctest.h>

#include "maternlab/errors.hpp"
#include "maternlab/gp.hpp"
#include "maternlab/rng.hpp"

using namespace maternlab;

namespace {

SiteSet random_sites(std::size_t n, int d, std::uint64_t seed) {
  CounterRng rng(seed, 11);
  std::vector<double> c(n * static_cast<std::size_t>(d));
  for (auto& v : c) v = rng.uniform();
  return SiteSet(d, c);
}

GpDataset simulated(const CovarianceModel& m, const SiteSet& s, std::uint64_t seed) {
  return simulate(m, s, seed, 1).front();
}

}  // namespace

TEST_CASE("log likelihood against mpmath") {
  const SiteSet s(1, {0.0, 0.3, 1.0});
  GpDataset data{s, Eigen::Vector3d(0.2, -1.0, 0.5), 0};
  CHECK(log_likelihood({Matern{1.5, 0.5}, 2.0}, data) ==
        doctest::Approx(-5.4332316613145974).epsilon(1e-13));
}

TEST_CASE("concentrated likelihood is the profile maximum") {
  const auto s = random_sites(40, 2, 1);
  const CovarianceModel m{Matern{0.5, 0.3}, 1.7};
  const auto data = simulated(m, s, 5);
  const auto c = concentrated_loglik(m.kernel, data);
  CHECK(c.value == doctest::Approx(log_likelihood({m.kernel, c.sigma2_hat}, data)).epsilon(1e-12));
  CHECK(c.value > log_likelihood({m.kernel, 1.1 * c.sigma2_hat}, data));
  CHECK(c.value > log_likelihood({m.kernel, 0.9 * c.sigma2_hat}, data));
  CHECK(c.sigma2_hat == doctest::Approx(interpolant_norm2(m, data) / 40.0));
  GpDataset flat{s, Eigen::VectorXd::Zero(40), 0};
  CHECK_THROWS_AS(concentrated_loglik(m.kernel, flat), FlatData);
}

TEST_CASE("kriging interpolates and power function squares to the variance") {
  // Randomized property over many small configurations.
  for (std::uint64_t t = 0; t < 200; ++t) {
    CounterRng rng(t, 0);
    const int d = 1 + static_cast<int>(t % 3);
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 12);
    const auto s = random_sites(n, d, 1000 + t);
    const double nu = 0.5 + std::floor(rng.uniform() * 3);
    const CovarianceModel m{Matern{nu, 0.1 + rng.uniform()}, 0.5 + rng.uniform()};
    const auto data = simulated(m, s, t);
    const std::size_t i = t % n;
    const auto at_site = krige(m, data, s.point(i));
    CHECK(at_site.mean == data.values[static_cast<Eigen::Index>(i)]);
    CHECK(at_site.variance == 0.0);
    std::vector<double> x0(static_cast<std::size_t>(d));
    for (auto& v : x0) v = rng.uniform();
    const auto p = krige(m, data, x0);
    const double pf = power_function(m, s, x0);
    CHECK(std::abs(pf * pf - p.variance) <= 1e-12 * m.sigma2);
    CHECK(p.variance >= 0.0);
    CHECK(p.variance <= m.sigma2);
  }
}

TEST_CASE("power function on an empty design is sigma") {
  const std::vector<double> x0{0.5};
  CHECK(power_function({Matern{0.5, 1.0}, 4.0}, SiteSet(1, {}), x0) == 2.0);
}

TEST_CASE("simulation is reproducible and replicate streams are independent of the count") {
  const auto s = random_sites(30, 2, 3);
  const CovarianceModel m{Matern{1.5, 0.2}, 1.0};
  const auto a = simulate(m, s, 42, 3);
  const auto b = simulate(m, s, 42, 1);
  CHECK(a[0].values == b[0].values);
  CHECK(a[1].values != a[0].values);
  ThreadPool pool(3);
  CHECK(simulate(m, s, 42, 3, pool)[2].values == a[2].values);
}

TEST_CASE("simulated replicates have the model covariance") {
  const SiteSet s(1, {0.0, 0.1, 0.5});
  const CovarianceModel m{Matern{0.5, 0.2}, 2.0};
  const std::size_t reps = 20000;
  const auto data = simulate(m, s, 7, reps);
  Eigen::Matrix3d emp = Eigen::Matrix3d::Zero();
  for (const auto& d : data) emp += d.values * d.values.transpose();
  emp /= static_cast<double>(reps);
  const auto K = build_cov_matrix(m, s);
  CHECK((emp - K).cwiseAbs().maxCoeff() < 0.08);
}

TEST_CASE("maximum likelihood recovers the range on a dense design") {
  const auto s = grid_sites(1.0 / 19.0, 2);
  const CovarianceModel truth{Matern{0.5, 0.2}, 1.0};
  const auto data = simulated(truth, s, 11);
  const FitSpec spec{Matern{0.5, 0.5}, {"alpha"}, {}};
  const auto fit = fit_ml(spec, data);
  CHECK(fit.converged);
  CHECK(fit.theta_hat.as<Matern>().alpha == doctest::Approx(0.2).epsilon(0.5));
  CHECK(fit.micro_hat == doctest::Approx(fit.sigma2_hat / fit.theta_hat.as<Matern>().alpha));
  // The fitted value is a local maximum of the concentrated likelihood.
  for (double f : {0.97, 1.03}) {
    const auto k = set_parameter(fit.theta_hat, "alpha", f * fit.theta_hat.as<Matern>().alpha);
    CHECK(concentrated_loglik(k, data, JitterPolicy::escalating).value <= fit.loglik + 1e-9);
  }
  const auto again = fit_ml(spec, data);
  CHECK(again.loglik == fit.loglik);
}

TEST_CASE("fit input validation") {
  const auto s = random_sites(20, 1, 2);
  const auto data = simulated({Matern{0.5, 0.2}, 1.0}, s, 1);
  CHECK_THROWS_AS(fit_ml({Matern{0.5, 0.2}, {}, {}}, data), NoFreeParameters);
  CHECK_THROWS_AS(fit_ml({Matern{0.5, 0.2}, {"beta"}, {}}, data), ValidationError);
  CHECK_THROWS_AS(fit_ml({Matern{0.5, 0.2}, {"alpha"}, {{"alpha", {1.0, 2.0}}}}, data), ValidationError);
  CHECK_THROWS_AS(fit_ml({Matern{0.5, 0.2}, {"alpha"}, {{"alpha", {2.0, 1.0}}}}, data), ValidationError);
}

TEST_CASE("microergodic parameters") {
  CHECK(microergodic({Matern{1.5, 0.2}, 2.0}) == doctest::Approx(250.0));
  CHECK(microergodic({GenWendland{1.0, 5.0, 0.5}, 3.0}) == doctest::Approx(3.0 / 0.125));
  const double ch = 2.0 * std::tgamma(0.5 + 3.0) / (std::pow(2.0, 1.0) * std::tgamma(3.0));
  CHECK(microergodic({ConfluentHypergeometric{0.5, 3.0, 2.0}, 2.0}) == doctest::Approx(ch));
  CHECK_THROWS_AS(microergodic({Askey{2.0, 1.0}, 1.0}), UnsupportedFamily);
}

TEST_CASE("equivalence conditions") {
  const CovarianceModel a{Matern{0.5, 0.1}, 1.0};
  const CovarianceModel b{Matern{0.5, 0.2}, 2.0};
  CHECK(equivalence_check(a, b, 1).equivalent);
  CHECK(equivalence_check(a, b, 3).condition_residual < 1e-14);
  CHECK_FALSE(equivalence_check(a, {Matern{0.5, 0.2}, 1.0}, 2).equivalent);
  CHECK_FALSE(equivalence_check(a, {Matern{1.5, 0.1}, 1.0}, 2).equivalent);

  // Gamma(2 kappa + mu + 1) / Gamma(mu) = 7!/4! = 210 for kappa = 1, mu = 5.
  const CovarianceModel gw{GenWendland{1.0, 5.0, 1.0}, 1.0};
  CHECK(equivalence_check({Matern{1.5, 1.0}, 210.0}, gw, 2).equivalent);
  CHECK(equivalence_check(gw, {Matern{1.5, 1.0}, 210.0}, 2).equivalent);
  const auto side = equivalence_check({Matern{1.5, 1.0}, 210.0}, {GenWendland{1.0, 3.2, 1.0}, 1.0}, 3);
  CHECK_FALSE(side.equivalent);
  CHECK_FALSE(side.notes.empty());

  // CH(nu, eta, beta): Gamma(nu + eta)/Gamma(eta) (beta^2/2)^(-nu).
  const double nu = 0.5, eta = 2.0, beta = 1.5;
  const double rhs = std::tgamma(nu + eta) / std::tgamma(eta) * std::pow(beta * beta / 2.0, -nu);
  CHECK(equivalence_check({Matern{nu, 1.0}, rhs}, {ConfluentHypergeometric{nu, eta, beta}, 1.0}, 2)
            .equivalent);

  CHECK_THROWS_AS(equivalence_check(a, b, 4), DimensionOutOfRange);
  CHECK_THROWS_AS(equivalence_check({Askey{2.0, 1.0}, 1.0}, {Askey{3.0, 1.0}, 1.0}, 1), UnsupportedPair);
}

TEST_CASE("misspecified prediction") {
  const auto s = random_sites(25, 2, 4);
  const std::vector<double> x0{0.5, 0.5};
  const CovarianceModel truth{Matern{0.5, 0.2}, 1.0};
  const auto same = misspecified_mse(truth, truth, s, x0);
  CHECK(same.ratio_efficiency == doctest::Approx(1.0));
  CHECK(same.ratio_variance_assessment == doctest::Approx(1.0));
  const auto wrong = misspecified_mse(truth, {Matern{1.5, 0.1}, 3.0}, s, x0);
  CHECK(wrong.ratio_efficiency >= 1.0 - 1e-12);
  CHECK(wrong.mse_oracle == doctest::Approx(std::pow(power_function(truth, s, x0), 2)));
  const auto none = misspecified_mse(truth, truth, SiteSet(2, {}), x0);
  CHECK(none.mse_oracle == 1.0);
}

TEST_CASE("Vecchia approximation limits") {
  const auto s = random_sites(60, 2, 6);
  const CovarianceModel m{Matern{1.5, 0.15}, 1.3};
  const auto data = simulated(m, s, 3);
  const double exact = log_likelihood(m, data);
  CHECK(std::abs(vecchia_loglik(m, data, 59) - exact) <= 1e-8 * std::abs(exact));
  double indep = 0.0;
  for (Eigen::Index i = 0; i < data.values.size(); ++i) {
    const double z = data.values[i];
    indep += -0.5 * (std::log(2.0 * std::numbers::pi * m.sigma2) + z * z / m.sigma2);
  }
  CHECK(vecchia_loglik(m, data, 0) == doctest::Approx(indep).epsilon(1e-14));
  ThreadPool pool(4);
  CHECK(vecchia_loglik(m, data, 7, pool) == vecchia_loglik(m, data, 7));
}

TEST_CASE("Vecchia neighbors: nearest previous, ties to the lower index") {
  const SiteSet s(1, {0.0, 2.0, 1.0, 3.0, 1.5});
  CHECK(vecchia_neighbors(s, 0, 3).empty());
  CHECK(vecchia_neighbors(s, 4, 2) == std::vector<std::size_t>{1, 2});  // tie at distance 0.5
  CHECK(vecchia_neighbors(s, 2, 5) == std::vector<std::size_t>{0, 1});  // tie at distance 1
  CHECK(vecchia_neighbors(s, 3, 1) == std::vector<std::size_t>{1});
}

TEST_CASE("JSON output") {
  CHECK(to_json(Prediction{1.5, 0.25}) == R"({"mean":1.5,"variance":0.25})");
  FitResult r;
  r.micro_hat = std::numeric_limits<double>::quiet_NaN();
  CHECK(to_json(r).find(R"("micro_hat":null)") != std::string::npos);
}
