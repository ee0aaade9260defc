#include <cmath>
#include <set>

#include <doctest.h>

#include "maternlab/errors.hpp"
#include "maternlab/linalg.hpp"
#include "maternlab/rng.hpp"

using namespace maternlab;

namespace {

SiteSet random_sites(std::size_t n, int d, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  std::vector<double> c(n * static_cast<std::size_t>(d));
  for (auto& v : c) v = rng.uniform();
  return SiteSet(d, c);
}

}  // namespace

TEST_CASE("grid sites") {
  const auto g = grid_sites(0.5, 2);
  REQUIRE(g.size() == 9);
  CHECK(g.point(0)[0] == 0.0);
  CHECK(g.point(1)[1] == 0.5);
  CHECK(g.point(3)[0] == 0.5);  // first axis slowest
  CHECK(grid_sites(0.015, 2).size() == 4489);
  CHECK(grid_sites(0.03, 2).size() == 1156);
}

TEST_CASE("site sets reject duplicates and ragged input") {
  CHECK_THROWS_AS(SiteSet(2, {0.0, 0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(SiteSet(2, {0.0, 0.0, 1.0}), ShapeMismatch);
}

TEST_CASE("reordering is a permutation") {
  const auto s = random_sites(50, 2, 1);
  for (auto o : {Ordering::natural, Ordering::random, Ordering::maxmin}) {
    const auto r = reorder(s, o, 3);
    REQUIRE(r.size() == s.size());
    std::set<std::size_t> idx(r.source_index().begin(), r.source_index().end());
    CHECK(idx.size() == s.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(r.point(i)[0] == s.point(r.source_index()[i])[0]);
    }
  }
  CHECK(reorder(s, Ordering::random, 3).source_index() == reorder(s, Ordering::random, 3).source_index());
}

TEST_CASE("maxmin starts near the centroid and spreads out") {
  const auto g = grid_sites(0.25, 2);
  const auto r = reorder(g, Ordering::maxmin);
  CHECK(r.point(0)[0] == 0.5);
  CHECK(r.point(0)[1] == 0.5);
  // Second point is a corner, the farthest from the center.
  CHECK(distance(r.point(0), r.point(1)) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("Cholesky, solves and inverse") {
  const auto s = random_sites(120, 2, 2);
  const CovarianceModel m{Matern{1.5, 0.2}, 2.0};
  const auto K = build_cov_matrix(m, s);
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const auto c = cholesky(K);
  CHECK((c.L * c.L.transpose() - K).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  const Eigen::MatrixXd Lr = llt.matrixL();
  CHECK(c.logdet == doctest::Approx(2.0 * Lr.diagonal().array().log().sum()).epsilon(1e-12));
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(120, -1.0, 1.0);
  const Eigen::VectorXd x = solve(c, b);
  CHECK((K * x - b).norm() / b.norm() < 1e-8);
  const auto inv = invert_spd(c);
  CHECK((inv * K - Eigen::MatrixXd::Identity(120, 120)).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((inv - inv.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd y = solve_lower(c, b);
  CHECK((c.L * y - b).norm() < 1e-10);
  const Eigen::MatrixXd z = solve_upper(c, b);
  CHECK((c.L.transpose() * z - b).norm() < 1e-9);
}

TEST_CASE("inverse of a larger matrix exercises the blocked path") {
  const auto s = grid_sites(1.0 / 19.0, 2);  // 400 sites
  const auto K = build_cov_matrix({Matern{0.5, 0.1}, 1.0}, s);
  const auto inv = invert_spd(cholesky(K));
  const Eigen::MatrixXd r = inv * K - Eigen::MatrixXd::Identity(K.rows(), K.cols());
  CHECK(r.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("jitter policy") {
  Eigen::MatrixXd K = Eigen::MatrixXd::Ones(3, 3);  // rank one
  CHECK_THROWS_AS(cholesky(K), NotPositiveDefinite);
  const auto c = cholesky(K, JitterPolicy::escalating);
  CHECK(c.jitter_used > 0.0);
  CHECK(c.jitter_used <= 1e-8);
  Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(cholesky(neg, JitterPolicy::escalating), NotPositiveDefinite);
}

TEST_CASE("quasi sparsity counts strict triangles") {
  Eigen::MatrixXd m(3, 3);
  m << 1, 0, 1e-9,
       2, 1, 0.5,
       0, 0, 1;
  CHECK(quasi_sparsity(m, 0.0) == doctest::Approx(100.0 / 3.0));
  CHECK(quasi_sparsity(m, 1e-8) == doctest::Approx(200.0 / 3.0));
  CHECK(quasi_sparsity(m, 1e-8, TrianglePart::strict_lower) == doctest::Approx(200.0 / 3.0));
  CHECK(quasi_sparsity(m, 0.0, TrianglePart::strict_lower) == doctest::Approx(200.0 / 3.0));
}

TEST_CASE("compact support gives exact zeros") {
  const auto s = grid_sites(0.1, 1);
  const auto K = build_cov_matrix({Askey{2.0, 0.25}, 1.0}, s);
  // Pairs with |i - j| >= 3 are at distance >= 0.3 > 0.25.
  CHECK(K(0, 3) == 0.0);
  CHECK(K(0, 2) > 0.0);
}

TEST_CASE("matrix CSV uses 17 significant digits") {
  Eigen::MatrixXd m(1, 2);
  m << 0.1, 1.0 / 3.0;
  CHECK(matrix_to_csv(m) == "0.10000000000000001,0.33333333333333331\n");
}

TEST_CASE("covariance matrix build is executor independent") {
  const auto s = random_sites(64, 3, 9);
  ThreadPool pool(4);
  const CovarianceModel m{GenWendland{1.0, 5.0, 0.6}, 1.5};
  CHECK(build_cov_matrix(m, s) == build_cov_matrix(m, s, pool));
}
