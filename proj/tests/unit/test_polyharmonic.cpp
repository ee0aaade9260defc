#include <cmath>

#include <doctest.h>

#include "maternlab/errors.hpp"
#include "maternlab/experiments.hpp"
#include "maternlab/polyharmonic.hpp"
#include "maternlab/rng.hpp"

using namespace maternlab;

TEST_CASE("order and monomial basis") {
  CHECK(polyharmonic_order(1.5, 1) == 2);
  CHECK(polyharmonic_order(1.0, 1) == 1);
  CHECK(polyharmonic_order(2.5, 2) == 2);
  const auto e = monomial_exponents(2, 2);
  REQUIRE(e.size() == 3);
  CHECK(e[0] == std::vector<int>{0, 0});
  CHECK(monomial_exponents(3, 3).size() == 10);
}

TEST_CASE("interpolation conditions and polynomial reproduction") {
  CounterRng rng(3, 0);
  std::vector<double> c;
  for (int i = 0; i < 30; ++i) {
    c.push_back(rng.uniform());
    c.push_back(rng.uniform());
  }
  const SiteSet s(2, c);
  Eigen::VectorXd v(30);
  for (Eigen::Index i = 0; i < 30; ++i) v[i] = 1.0 + 2.0 * c[2 * i] - 0.5 * c[2 * i + 1];
  const PolyharmonicInterpolant p(2.0, s, v);  // order 2 reproduces linear functions
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(p(s.point(i)) == doctest::Approx(v[static_cast<Eigen::Index>(i)]).epsilon(1e-9));
  }
  const std::vector<double> x{0.37, 0.81};
  CHECK(p(x) == doctest::Approx(1.0 + 0.74 - 0.405).epsilon(1e-9));
  CHECK(p.kernel_coefficients().cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("scale invariance") {
  CounterRng rng(5, 0);
  std::vector<double> c;
  for (int i = 0; i < 25; ++i) c.push_back(rng.uniform());
  const SiteSet s(1, c);
  Eigen::VectorXd v(25);
  for (Eigen::Index i = 0; i < 25; ++i) v[i] = std::sin(6.0 * c[static_cast<std::size_t>(i)]);
  const std::vector<double> x0{0.4321};
  for (double nu : {1.0, 1.5, 2.5}) {
    CHECK(polyharmonic_scale_invariance(nu, s, v, x0, {0.5, 1.0, 2.0, 10.0}) < 1e-8);
  }
}

TEST_CASE("degenerate designs") {
  const SiteSet collinear(2, {0.0, 0.0, 0.5, 0.5, 1.0, 1.0, 0.25, 0.25});
  CHECK_THROWS_AS(PolyharmonicInterpolant(2.0, collinear, Eigen::VectorXd::Ones(4)), DegenerateDesign);
  const SiteSet one(1, {0.3});
  CHECK_THROWS_AS(PolyharmonicInterpolant(1.5, one, Eigen::VectorXd::Ones(1)), DegenerateDesign);
}
