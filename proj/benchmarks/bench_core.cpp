#include <benchmark/benchmark.h>

#include "maternlab/gp.hpp"
#include "maternlab/kernels.hpp"
#include "maternlab/linalg.hpp"
#include "maternlab/rng.hpp"
#include "maternlab/specfun.hpp"
#include "maternlab/spectral.hpp"

using namespace maternlab;

namespace {

SiteSet random_sites(std::size_t n, int d) {
  CounterRng rng(1, 0);
  std::vector<double> c(n * static_cast<std::size_t>(d));
  for (auto& v : c) v = rng.uniform();
  return SiteSet(d, c);
}

void BM_BesselK(benchmark::State& state) {
  const double nu = static_cast<double>(state.range(0)) + 0.3;
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_k(nu, x));
    x = x < 30.0 ? x * 1.1 : 0.01;
  }
}
BENCHMARK(BM_BesselK)->Arg(0)->Arg(2)->Arg(10);

void BM_Correlation(benchmark::State& state) {
  const KernelSpec specs[] = {Matern{1.3, 1.0}, GenWendland{1.0, 5.0, 1.0},
                              ConfluentHypergeometric{0.5, 2.0, 1.0}};
  const auto& k = specs[state.range(0)];
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(correlation(k, 2, x));
    x = x < 0.99 ? x + 0.01 : 0.0;
  }
}
BENCHMARK(BM_Correlation)->DenseRange(0, 2);

void BM_CholeskyInvert(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto K = build_cov_matrix({Matern{1.5, 0.2}, 1.0}, random_sites(n, 2));
  for (auto _ : state) {
    const auto chol = cholesky(K, JitterPolicy::escalating);
    benchmark::DoNotOptimize(invert_spd(chol).data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CholeskyInvert)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_VecchiaLoglik(benchmark::State& state) {
  const CovarianceModel m{Matern{0.5, 0.3}, 1.0};
  const auto data = simulate(m, random_sites(400, 2), 2, 1).front();
  const auto nn = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vecchia_loglik(m, data, nn));
}
BENCHMARK(BM_VecchiaLoglik)->Arg(5)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_RadialFourier(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(radial_fourier(Matern{1.5, 1.0}, d, 5.0));
}
BENCHMARK(BM_RadialFourier)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
