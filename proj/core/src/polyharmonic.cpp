#include "maternlab/polyharmonic.hpp"

#include <cmath>

#include "maternlab/errors.hpp"
#include "maternlab/kernels.hpp"

namespace maternlab {

namespace {

void exponents_rec(int d, int pos, int remaining, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    exponents_rec(d, pos + 1, remaining - e, cur, out);
  }
}

double monomial(const std::vector<int>& e, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (int k = 0; k < e[j]; ++k) v *= x[j];
  }
  return v;
}

}  // namespace

int polyharmonic_order(double nu, int d) {
  return static_cast<int>(std::floor(nu - 0.5 * d)) + 1;
}

std::vector<std::vector<int>> monomial_exponents(int d, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  for (int deg = 0; deg < order; ++deg) exponents_rec(d, 0, deg, cur, out);
  return out;
}

PolyharmonicInterpolant::PolyharmonicInterpolant(double nu, const SiteSet& sites,
                                                 const Eigen::VectorXd& values, double scale)
    : nu_(nu), scale_(scale), sites_(sites) {
  const int d = sites.dim();
  require_valid(Polyharmonic{nu, d}, d);
  if (!(scale > 0.0)) throw DomainError("polyharmonic: scale must be positive");
  const auto n = static_cast<Eigen::Index>(sites.size());
  if (values.size() != n) throw ShapeMismatch("polyharmonic: one value per site required");
  exps_ = monomial_exponents(d, polyharmonic_order(nu, d));
  const auto q = static_cast<Eigen::Index>(exps_.size());
  if (n < q) {
    throw DegenerateDesign("polyharmonic: " + std::to_string(n) + " sites cannot determine " +
                           std::to_string(q) + " polynomial coefficients");
  }
  Eigen::MatrixXd p(n, q);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      p(i, j) = monomial(exps_[static_cast<std::size_t>(j)], sites.point(static_cast<std::size_t>(i)));
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(p);
  if (qr.rank() < q) throw DegenerateDesign("polyharmonic: polynomial block is rank deficient");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + q, n + q);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = distance(sites.point(static_cast<std::size_t>(i)),
                                sites.point(static_cast<std::size_t>(j)));
      a(i, j) = a(j, i) = polyharmonic_value(nu, d, r / scale);
    }
  }
  // The kernel block scales like scale^-(2 nu - d); normalize it so the rank
  // test compares like with like. Only the kernel coefficients change.
  const double k_max = a.topLeftCorner(n, n).cwiseAbs().maxCoeff();
  const double k_scale = k_max > 0.0 ? k_max : 1.0;
  a.topLeftCorner(n, n) /= k_scale;
  a.topRightCorner(n, q) = p;
  a.bottomLeftCorner(q, n) = p.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + q);
  rhs.head(n) = values;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw DegenerateDesign("polyharmonic: singular interpolation system");
  const Eigen::VectorXd sol = lu.solve(rhs);
  coef_ = sol.head(n) / k_scale;
  poly_ = sol.tail(q);
}

double PolyharmonicInterpolant::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(sites_.dim())) {
    throw ShapeMismatch("polyharmonic: location dimension differs from the site set");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    v += coef_[static_cast<Eigen::Index>(i)] *
         polyharmonic_value(nu_, sites_.dim(), distance(x, sites_.point(i)) / scale_);
  }
  for (std::size_t j = 0; j < exps_.size(); ++j) {
    v += poly_[static_cast<Eigen::Index>(j)] * monomial(exps_[j], x);
  }
  return v;
}

}  // namespace maternlab
