#include <algorithm>
#include <cmath>
#include <numeric>

#include "maternlab/errors.hpp"
#include "maternlab/gp.hpp"

namespace maternlab {

std::vector<std::size_t> vecchia_neighbors(const SiteSet& sites, std::size_t i, std::size_t m) {
  const std::size_t k = std::min(m, i);
  std::vector<std::size_t> prev(i);
  std::iota(prev.begin(), prev.end(), 0);
  if (k == 0) return {};
  std::vector<double> dist(i);
  const auto xi = sites.point(i);
  for (std::size_t j = 0; j < i; ++j) dist[j] = distance(xi, sites.point(j));
  auto closer = [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(k), prev.end(), closer);
  prev.resize(k);
  return prev;
}

double vecchia_loglik(const CovarianceModel& model, const GpDataset& data, std::size_t m,
                      Executor& exec) {
  const auto& sites = data.sites;
  const std::size_t n = sites.size();
  if (data.values.size() != static_cast<Eigen::Index>(n)) {
    throw ShapeMismatch("vecchia_loglik: one value per site required");
  }
  require_valid(model.kernel, sites.dim());
  constexpr double kLog2Pi = 1.8378770664093454836;
  std::vector<double> terms(n);
  exec.parallel_for(n, [&](std::size_t i) {
    const auto nb = vecchia_neighbors(sites, i, m);
    const double zi = data.values[static_cast<Eigen::Index>(i)];
    double mean = 0.0;
    double var = model.sigma2;
    if (!nb.empty()) {
      std::vector<double> coords;
      coords.reserve(nb.size() * static_cast<std::size_t>(sites.dim()));
      Eigen::VectorXd z(static_cast<Eigen::Index>(nb.size()));
      for (std::size_t a = 0; a < nb.size(); ++a) {
        const auto p = sites.point(nb[a]);
        coords.insert(coords.end(), p.begin(), p.end());
        z[static_cast<Eigen::Index>(a)] = data.values[static_cast<Eigen::Index>(nb[a])];
      }
      const SiteSet block(sites.dim(), std::move(coords));
      const CholFactor chol = cholesky(build_cov_matrix(model, block));
      const Eigen::VectorXd w = solve_lower(chol, cross_cov(model, block, sites.point(i)));
      const Eigen::VectorXd zw = solve_lower(chol, z);
      mean = w.dot(zw);
      var = model.sigma2 - w.squaredNorm();
      if (!(var > 0.0)) {
        throw NotPositiveDefinite("vecchia_loglik: nonpositive conditional variance at site " +
                                  std::to_string(i));
      }
    }
    const double r = zi - mean;
    terms[i] = -0.5 * (kLog2Pi + std::log(var) + r * r / var);
  });
  // Fixed summation order keeps the result independent of the executor.
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

}  // namespace maternlab
