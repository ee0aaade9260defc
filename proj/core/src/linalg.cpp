#include "maternlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "maternlab/csv.hpp"
#include "maternlab/errors.hpp"
#include "maternlab/rng.hpp"


namespace maternlab {

std::string to_string(Ordering o) {
  switch (o) {
    case Ordering::natural:
      return "natural";
    case Ordering::random:
      return "random";
    case Ordering::maxmin:
      return "maxmin";
  }
  return "natural";
}

SiteSet::SiteSet(int d, std::vector<double> coords) : d_(d), coords_(std::move(coords)) {
  if (d < 1) throw DomainError("SiteSet: dimension must be positive");
  if (coords_.size() % static_cast<std::size_t>(d) != 0) {
    throw ShapeMismatch("SiteSet: coordinate count is not a multiple of d");
  }
  const std::size_t n = size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = point(a);
    const auto pb = point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(idx.begin(), idx.end(), less);
  for (std::size_t i = 1; i < n; ++i) {
    const auto pa = point(idx[i - 1]);
    const auto pb = point(idx[i]);
    if (std::equal(pa.begin(), pa.end(), pb.begin())) {
      throw DomainError("SiteSet: duplicate location at indices " + std::to_string(idx[i - 1]) +
                        " and " + std::to_string(idx[i]));
    }
  }
  source_.resize(n);
  std::iota(source_.begin(), source_.end(), 0);
}

SiteSet SiteSet::prefix(std::size_t count) const {
  count = std::min(count, size());
  SiteSet out = *this;
  out.coords_.resize(count * static_cast<std::size_t>(d_));
  out.source_.resize(count);
  return out;
}

SiteSet grid_sites(double spacing, int d) {
  if (!(spacing > 0.0)) throw DomainError("grid_sites: spacing must be positive");
  if (d < 1) throw DomainError("grid_sites: dimension must be positive");
  const auto m = static_cast<std::size_t>(std::floor(1.0 / spacing + 1e-9)) + 1;
  std::size_t n = 1;
  for (int k = 0; k < d; ++k) n *= m;
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      coords[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] =
          static_cast<double>(rem % m) * spacing;
      rem /= m;
    }
  }
  return SiteSet(d, std::move(coords));
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

SiteSet reorder(const SiteSet& sites, Ordering strategy, std::uint64_t seed) {
  const std::size_t n = sites.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (strategy == Ordering::random) {
    CounterRng rng(seed, 0);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
      std::swap(perm[i - 1], perm[j]);
    }
  } else if (strategy == Ordering::maxmin && n > 0) {
    const int d = sites.dim();
    std::vector<double> centroid(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = sites.point(i);
      for (int k = 0; k < d; ++k) centroid[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)];
    }
    for (double& c : centroid) c /= static_cast<double>(n);
    std::size_t first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double dist = distance(sites.point(i), centroid);
      if (dist < best) {
        best = dist;
        first = i;
      }
    }
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    std::vector<char> taken(n, 0);
    perm.clear();
    std::size_t cur = first;
    for (std::size_t step = 0; step < n; ++step) {
      perm.push_back(cur);
      taken[cur] = 1;
      std::size_t next = n;
      double far = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        mind[i] = std::min(mind[i], distance(sites.point(i), sites.point(cur)));
        if (mind[i] > far) {
          far = mind[i];
          next = i;
        }
      }
      cur = next;
    }
  }
  SiteSet out;
  out.d_ = sites.dim();
  out.coords_.resize(sites.coords().size());
  out.source_.resize(n);
  const auto d = static_cast<std::size_t>(sites.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = sites.point(perm[i]);
    std::copy(p.begin(), p.end(), out.coords_.begin() + static_cast<std::ptrdiff_t>(i * d));
    out.source_[i] = sites.source_index()[perm[i]];
  }
  out.ordering_ = strategy;
  out.seed_ = strategy == Ordering::random ? seed : 0;
  return out;
}

SymMatrix build_cov_matrix(const CovarianceModel& model, const SiteSet& sites, Executor& exec) {
  if (!(model.sigma2 > 0.0)) throw DomainError("build_cov_matrix: sigma2 must be positive");
  const int d = sites.dim();
  const bool spacetime = model.kernel.is<SpaceTimeGneiting>();
  require_valid(model.kernel, spacetime ? std::max(1, d - 1) : d);
  const auto n = static_cast<Eigen::Index>(sites.size());
  SymMatrix m(n, n);
  const bool unit_diagonal = !model.kernel.is<Polyharmonic>();
  exec.parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    const auto pi = sites.point(row);
    for (Eigen::Index j = 0; j < i; ++j) {
      m(i, j) = model.sigma2 * point_correlation(model.kernel, pi, sites.point(static_cast<std::size_t>(j)));
    }
    m(i, i) = unit_diagonal ? model.sigma2 : model.sigma2 * point_correlation(model.kernel, pi, pi);
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) m(j, i) = m(i, j);
  }
  return m;
}

Eigen::VectorXd cross_cov(const CovarianceModel& model, const SiteSet& sites,
                          std::span<const double> x0) {
  if (x0.size() != static_cast<std::size_t>(sites.dim())) {
    throw ShapeMismatch("cross_cov: location dimension differs from the site set");
  }
  Eigen::VectorXd c(static_cast<Eigen::Index>(sites.size()));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    c[static_cast<Eigen::Index>(i)] = model.sigma2 * point_correlation(model.kernel, sites.point(i), x0);
  }
  return c;
}

namespace {

using Block = Eigen::Ref<Eigen::MatrixXd>;
constexpr Eigen::Index kLeaf = 96;

// In-place factorization of the lower triangle; the strict upper part is
// left untouched.
bool try_potrf(Eigen::MatrixXd& a) {
  if (a.rows() == 0) return true;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> llt(a);
  return llt.info() == Eigen::Success;
}

// Lower-triangular inverse in place, by the 2 x 2 block recursion
// [[A, 0], [B, C]]^-1 = [[A^-1, 0], [-C^-1 B A^-1, C^-1]].
void invert_lower(Block l) {
  const Eigen::Index n = l.rows();
  if (n <= kLeaf) {
    Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
    l.triangularView<Eigen::Lower>().solveInPlace(inv);
    l.triangularView<Eigen::Lower>() = inv;
    return;
  }
  const Eigen::Index k = n / 2;
  invert_lower(l.topLeftCorner(k, k));
  invert_lower(l.bottomRightCorner(n - k, n - k));
  auto b = l.bottomLeftCorner(n - k, k);
  b = -(l.bottomRightCorner(n - k, n - k).triangularView<Eigen::Lower>() * b);
  b = b * l.topLeftCorner(k, k).triangularView<Eigen::Lower>();
}

// Lower triangle of X^T X for lower-triangular X, in place:
// with X = [[A, 0], [B, C]], X^T X = [[A^T A + B^T B, .], [C^T B, C^T C]].
void lower_gram(Block x) {
  const Eigen::Index n = x.rows();
  if (n <= kLeaf) {
    const Eigen::MatrixXd t = x.triangularView<Eigen::Lower>();
    x.triangularView<Eigen::Lower>() = t.transpose() * t;
    return;
  }
  const Eigen::Index k = n / 2;
  auto a = x.topLeftCorner(k, k);
  auto b = x.bottomLeftCorner(n - k, k);
  auto c = x.bottomRightCorner(n - k, n - k);
  lower_gram(a);
  a.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
  b = c.triangularView<Eigen::Lower>().transpose() * b;
  lower_gram(c);
}

}  // namespace

CholFactor cholesky(const SymMatrix& m, JitterPolicy jitter) {
  if (m.rows() != m.cols()) throw ShapeMismatch("cholesky: matrix is not square");
  if (!m.allFinite()) throw NotPositiveDefinite("cholesky: matrix has non-finite entries");
  CholFactor out;
  out.L = m;
  bool ok = try_potrf(out.L);
  if (!ok && jitter == JitterPolicy::escalating) {
    const double scale = m.diagonal().cwiseAbs().maxCoeff();
    for (double j = 1e-12; j <= 1e-8 * 1.0000001; j *= 10.0) {
      out.L = m;
      out.L.diagonal().array() += j * scale;
      if (try_potrf(out.L)) {
        out.jitter_used = j * scale;
        ok = true;
        break;
      }
    }
  }
  if (!ok) throw NotPositiveDefinite("cholesky: matrix is not positive definite");
  out.L.triangularView<Eigen::StrictlyUpper>().setZero();
  out.logdet = 2.0 * out.L.diagonal().array().log().sum();
  return out;
}

Eigen::MatrixXd solve_lower(const CholFactor& chol, const Eigen::MatrixXd& b) {
  if (b.rows() != chol.L.rows()) throw ShapeMismatch("solve_lower: row count mismatch");
  return chol.L.triangularView<Eigen::Lower>().solve(b);
}

Eigen::MatrixXd solve_upper(const CholFactor& chol, const Eigen::MatrixXd& b) {
  if (b.rows() != chol.L.rows()) throw ShapeMismatch("solve_upper: row count mismatch");
  return chol.L.transpose().triangularView<Eigen::Upper>().solve(b);
}

Eigen::MatrixXd solve(const CholFactor& chol, const Eigen::MatrixXd& b) {
  return solve_upper(chol, solve_lower(chol, b));
}

Eigen::MatrixXd invert_spd(const CholFactor& chol) {
  Eigen::MatrixXd a = chol.L;
  if (a.rows() == 0) return a;
  if ((a.diagonal().array() == 0.0).any()) {
    throw NotPositiveDefinite("invert_spd: factor is singular");
  }
  // A^-1 = L^-T L^-1
  invert_lower(a);
  lower_gram(a);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) a(i, j) = a(j, i);
  }
  return a;
}

double quasi_sparsity(const Eigen::MatrixXd& m, double epsilon, TrianglePart part) {
  if (epsilon < 0.0) throw DomainError("quasi_sparsity: epsilon must be nonnegative");
  if (m.rows() != m.cols()) throw ShapeMismatch("quasi_sparsity: matrix is not square");
  const Eigen::Index n = m.rows();
  if (n < 2) return 0.0;
  std::size_t hits = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = part == TrianglePart::strict_upper ? m(i, j) : m(j, i);
      if (epsilon == 0.0 ? v == 0.0 : std::abs(v) < epsilon) ++hits;
    }
  }
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return 100.0 * static_cast<double>(hits) / total;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += csv::format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace maternlab
