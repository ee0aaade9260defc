#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "maternlab/linalg.hpp"

namespace maternlab {

/// Order of conditional positive definiteness, floor(nu - d/2) + 1.
int polyharmonic_order(double nu, int d);

/// Exponents of all monomials of total degree < order in d variables,
/// graded by degree.
std::vector<std::vector<int>> monomial_exponents(int d, int order);

/// Polyharmonic interpolant with polynomial augmentation, kernel H(r / scale).
class PolyharmonicInterpolant {
 public:
  /// Throws DegenerateDesign when the polynomial block is rank deficient
  /// (including n smaller than the number of monomials).
  PolyharmonicInterpolant(double nu, const SiteSet& sites, const Eigen::VectorXd& values,
                          double scale = 1.0);

  double operator()(std::span<const double> x) const;

  const Eigen::VectorXd& kernel_coefficients() const { return coef_; }
  const Eigen::VectorXd& polynomial_coefficients() const { return poly_; }

 private:
  double nu_;
  double scale_;
  SiteSet sites_;
  std::vector<std::vector<int>> exps_;
  Eigen::VectorXd coef_;
  Eigen::VectorXd poly_;
};

}  // namespace maternlab
