#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "maternlab/errors.hpp"
#include "maternlab/kernels.hpp"
#include "maternlab/specfun.hpp"

namespace maternlab {

StateSpaceModel state_space_matern(int k, double alpha, double sigma2) {
  if (k < 0) throw DomainError("state_space_matern: k must be nonnegative");
  if (!(alpha > 0.0) || !(sigma2 > 0.0)) {
    throw DomainError("state_space_matern: alpha and sigma2 must be positive");
  }
  const int n = k + 1;
  StateSpaceModel m;
  m.k = k;
  m.alpha = alpha;
  m.sigma2 = sigma2;
  m.drift = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) m.drift(i, i + 1) = 1.0;
  for (int i = 0; i < n; ++i) {
    // a_i = C(k+1, i) alpha^(-(k+1-i))
    const double a = specfun::binom(static_cast<std::uint32_t>(k + 1), static_cast<std::uint32_t>(i)) *
                     std::pow(alpha, -(k + 1 - i));
    m.drift(n - 1, i) = -a;
  }

  // A P + P A^T + q e e^T = 0 via (I kron A + A kron I) vec(P) = -q vec(e e^T), first with q = 1.
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd kron(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n) = eye(i, j) * m.drift + m.drift(i, j) * eye;
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n * n);
  rhs((n - 1) * n + (n - 1)) = -1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(kron);
  if (!lu.isInvertible()) throw Error("state_space_matern: Lyapunov system is singular");
  const Eigen::VectorXd vec_p = lu.solve(rhs);
  Eigen::MatrixXd p = Eigen::Map<const Eigen::MatrixXd>(vec_p.data(), n, n);
  p = 0.5 * (p + p.transpose());
  if (!(p(0, 0) > 0.0)) throw Error("state_space_matern: Lyapunov solution not positive");
  m.noise_intensity = sigma2 / p(0, 0);
  m.stationary_cov = m.noise_intensity * p;
  return m;
}

double state_space_autocov(const StateSpaceModel& model, double h) {
  if (h < 0.0) throw DomainError("state_space_autocov: lag must be nonnegative");
  if (h == 0.0) return model.stationary_cov(0, 0);
  const Eigen::MatrixXd e = (model.drift * h).exp();
  return (e * model.stationary_cov)(0, 0);
}

}  // namespace maternlab
