#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maternlab/kernels.hpp"
#include "maternlab/parallel.hpp"

namespace maternlab {

enum class Ordering { natural, random, maxmin };

std::string to_string(Ordering o);

/// Ordered list of distinct d-dimensional locations.
class SiteSet {
 public:
  SiteSet() = default;
  /// `coords` is row-major, n rows of d values. Throws DomainError on
  /// duplicate points or a ragged coordinate list.
  SiteSet(int d, std::vector<double> coords);

  int dim() const { return d_; }
  std::size_t size() const { return d_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(d_); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  const std::vector<double>& coords() const { return coords_; }

  Ordering ordering() const { return ordering_; }
  std::uint64_t ordering_seed() const { return seed_; }
  /// Position of each point in the set this one was reordered from.
  const std::vector<std::size_t>& source_index() const { return source_; }

  /// Copy with points [first, first + count).
  SiteSet prefix(std::size_t count) const;

 private:
  friend SiteSet reorder(const SiteSet&, Ordering, std::uint64_t);
  int d_ = 0;
  std::vector<double> coords_;
  Ordering ordering_ = Ordering::natural;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> source_;
};

/// Lattice {0, h, 2h, ...} in [0, 1] per axis, first axis varying slowest.
SiteSet grid_sites(double spacing, int d);

/// natural keeps the order; random is a seeded shuffle; maxmin is greedy
/// farthest-point ordering from the site nearest the centroid (ties to the
/// lower index).
SiteSet reorder(const SiteSet& sites, Ordering strategy, std::uint64_t seed = 0);

double distance(std::span<const double> a, std::span<const double> b);

/// Dense symmetric matrix, full storage.
using SymMatrix = Eigen::MatrixXd;

/// Sigma_ij = sigma2 * correlation(x_i, x_j); rows are filled in parallel.
SymMatrix build_cov_matrix(const CovarianceModel& model, const SiteSet& sites,
                           Executor& exec = serial_executor());

/// Covariances between the sites and one location.
Eigen::VectorXd cross_cov(const CovarianceModel& model, const SiteSet& sites,
                          std::span<const double> x0);

enum class JitterPolicy { none, escalating };

struct CholFactor {
  Eigen::MatrixXd L;  // lower triangle; strict upper part is zero
  double logdet = 0.0;
  double jitter_used = 0.0;
  std::size_t size() const { return static_cast<std::size_t>(L.rows()); }
};

/// Escalating jitter adds 1e-12, 1e-11, ..., 1e-8 times the largest diagonal
/// entry until the factorization succeeds.
CholFactor cholesky(const SymMatrix& m, JitterPolicy jitter = JitterPolicy::none);

Eigen::MatrixXd solve_lower(const CholFactor& chol, const Eigen::MatrixXd& b);
Eigen::MatrixXd solve_upper(const CholFactor& chol, const Eigen::MatrixXd& b);
/// Solves A x = b for the factored matrix A.
Eigen::MatrixXd solve(const CholFactor& chol, const Eigen::MatrixXd& b);
Eigen::MatrixXd invert_spd(const CholFactor& chol);

enum class TrianglePart { strict_upper, strict_lower };

/// Percentage of entries in the chosen strict triangle with |m_ij| < epsilon;
/// epsilon = 0 counts exact zeros.
double quasi_sparsity(const Eigen::MatrixXd& m, double epsilon,
                      TrianglePart part = TrianglePart::strict_upper);

/// Row-major CSV, 17 significant digits.
std::string matrix_to_csv(const Eigen::MatrixXd& m);

}  // namespace maternlab
