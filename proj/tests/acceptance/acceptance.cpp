// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference sparsity values are hard-coded below; derived
// values are checked against independent evaluation routes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "maternlab/csv.hpp"
#include "maternlab/errors.hpp"
#include "maternlab/experiments.hpp"
#include "maternlab/gp.hpp"
#include "maternlab/kernels.hpp"
#include "maternlab/rng.hpp"
#include "maternlab/spectral.hpp"

using namespace maternlab;

namespace {

constexpr double kInf = kMuInfinity;

// One reference row: support C (negative when not listed), then for
// n = 1156 and n = 4489 the exact-zero, precision and Cholesky percentages.
struct TableRow {
  double kappa, mu, support;
  double zero[2], prec[2], chol[2];
};

// Practical range 0.15.
const std::vector<TableRow> kRange015 = {
    {0, 1.5, 0.07, {98.4, 98.3}, {32.3, 1.46}, {35.7, 2.17}},
    {0, 4, 0.20, {90.1, 89.6}, {45.9, 56.0}, {45.0, 54.9}},
    {0, 8, 0.40, {66.4, 65.7}, {56.6, 64.2}, {52.0, 60.0}},
    {0, 16, 0.80, {16.4, 15.2}, {59.8, 71.5}, {53.8, 66.6}},
    {0, 32, 1.60, {0, 0}, {61.2, 79.0}, {55.8, 72.8}},
    {0, 120, 6.01, {0, 0}, {65.2, 76.6}, {58.9, 68.2}},
    {0, kInf, -1, {0, 0}, {66.2, 77.5}, {58.9, 70.0}},
    {1, 2.5, 0.11, {97.1, 96.7}, {3.80, 1.67}, {6.39, 4.44}},
    {1, 4, 0.16, {93.4, 93.3}, {34.2, 47.1}, {36.6, 48.7}},
    {1, 8, 0.28, {80.9, 80.7}, {69.7, 57.0}, {69.3, 59.2}},
    {1, 16, 0.54, {48.1, 47.1}, {64.2, 80.1}, {64.0, 76.0}},
    {1, 32, 1.04, {1.91, 1.61}, {66.4, 83.8}, {66.5, 82.2}},
    {1, 120, 3.82, {0, 0}, {66.2, 84.6}, {65.9, 81.2}},
    {1, kInf, -1, {0, 0}, {66.2, 84.9}, {65.1, 80.7}},
    {2, 3.5, 0.13, {94.7, 95.0}, {2.90, 1.31}, {5.63, 6.12}},
    {2, 4, 0.15, {94.8, 94.2}, {10.4, 11.9}, {15.0, 22.6}},
    {2, 8, 0.25, {84.7, 84.4}, {42.8, 61.0}, {47.3, 64.8}},
    {2, 16, 0.45, {59.1, 58.3}, {51.7, 73.0}, {54.6, 74.2}},
    {2, 32, 0.86, {11.0, 10.1}, {52.3, 75.7}, {54.8, 77.2}},
    {2, 120, 3.09, {0, 0}, {52.4, 75.7}, {54.1, 76.5}},
    {2, kInf, -1, {0, 0}, {52.4, 75.4}, {53.6, 74.6}},
};

// Practical range 0.4.
const std::vector<TableRow> kRange040 = {
    {0, 1.5, 0.20, {90.0, 89.1}, {0, 0}, {0, 0}},
    {0, 4, 0.53, {48.7, 47.3}, {1.03, 9.62}, {0.58, 2.77}},
    {0, 8, 1.07, {1.43, 1.21}, {4.14, 25.6}, {1.84, 8.15}},
    {0, 16, 2.13, {0, 0}, {15.0, 43.5}, {4.98, 21.3}},
    {0, 32, 4.27, {0, 0}, {22.8, 44.4}, {12.7, 24.3}},
    {0, 120, 16.0, {0, 0}, {21.0, 46.2}, {8.33, 21.9}},
    {0, kInf, -1, {0, 0}, {23.4, 47.9}, {9.85, 24.0}},
    {1, 2.5, 0.28, {80.5, 80.2}, {0, 0}, {0, 0}},
    {1, 4, 0.42, {65.0, 63.7}, {0, 1.03}, {1.12, 0.81}},
    {1, 8, 0.75, {20.7, 19.7}, {5.91, 14.5}, {4.49, 12.9}},
    {1, 16, 1.43, {0, 0}, {21.2, 45.2}, {17.1, 30.8}},
    {1, 32, 2.78, {0, 0}, {37.2, 55.0}, {29.0, 41.0}},
    {1, 120, 10.2, {0, 0}, {40.8, 59.8}, {32.2, 46.2}},
    {1, kInf, -1, {0, 0}, {42.6, 61.3}, {34.3, 48.0}},
    {2, 3.5, 0.35, {72.6, 71.4}, {0, 0}, {0, 0}},
    {2, 4, 0.39, {67.2, 66.4}, {0, 0}, {0, 0}},
    {2, 8, 0.67, {30.7, 29.6}, {0.71, 2.73}, {2.13, 6.90}},
    {2, 16, 1.21, {1.72, 1.29}, {13.7, 25.8}, {14.8, 27.9}},
    {2, 32, 2.29, {0, 0}, {25.5, 23.5}, {24.8, 42.7}},
    {2, 120, 8.24, {0, 0}, {26.0, 10.9}, {25.9, 46.4}},
    {2, kInf, -1, {0, 0}, {26.0, 18.2}, {25.9, 46.6}},
};

// Rows held to the tighter tolerance: (range, kappa, mu, n index).
struct SpotRow {
  double range, kappa, mu;
  int n_index;
};
const std::vector<SpotRow> kSpotRows = {{0.15, 0, 4, 0}, {0.4, 1, 8, 1}};

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct TableRun {
  std::vector<SparsityRow> rows;
  double seconds = 0.0;
};

TableRun run_table(double range, Executor& exec) {
  SparsityConfig cfg;
  cfg.target_range = range;
  const auto t0 = std::chrono::steady_clock::now();
  TableRun out{sparsity_table(cfg, exec), 0.0};
  out.seconds = seconds_since(t0);
  return out;
}

const SparsityRow* find_row(const std::vector<SparsityRow>& rows, double kappa, double mu, std::size_t n) {
  for (const auto& r : rows) {
    if (r.kappa == kappa && r.n == n && (r.mu == mu || (std::isinf(r.mu) && std::isinf(mu)))) return &r;
  }
  return nullptr;
}

const std::size_t kN[2] = {1156, 4489};

std::string cell_name(double range, const TableRow& t, int k) {
  return fmt("range %.2f kappa %.0f mu %g n %.0f", range, t.kappa, t.mu, static_cast<double>(kN[k]));
}

Outcome criterion1(const TableRun& t1) {
  int bad = 0, checked = 0;
  std::string detail;
  for (const auto& t : kRange015) {
    for (int k = 0; k < 2; ++k) {
      const auto* r = find_row(t1.rows, t.kappa, t.mu, kN[k]);
      ++checked;
      if (r == nullptr) {
        ++bad;
        detail += " missing[" + cell_name(0.15, t, k) + "]";
        continue;
      }
      if (std::abs(r->pct_zero_cov - t.zero[k]) > 0.5) {
        ++bad;
        detail += " [" + cell_name(0.15, t, k) + fmt(": zero %.2f vs %.2f]", r->pct_zero_cov, t.zero[k]);
      }
      if (t.support > 0 && std::abs(r->support - t.support) > 0.01) {
        ++bad;
        detail += " [" + cell_name(0.15, t, k) + fmt(": C %.3f vs %.2f]", r->support, t.support);
      }
    }
  }
  const bool fast = t1.seconds < 20 * 60;
  if (!fast) ++bad;
  return {bad == 0, fmt("%.0f cells, %.0f off; runtime %.0f s", checked, bad, t1.seconds) + detail};
}

Outcome criterion2(const TableRun& t1, const TableRun& t2) {
  int bad = 0, checked = 0;
  std::string detail;
  auto check = [&](const std::vector<TableRow>& table, const TableRun& run, double range) {
    for (const auto& t : table) {
      for (int k = 0; k < 2; ++k) {
        const auto* r = find_row(run.rows, t.kappa, t.mu, kN[k]);
        if (r == nullptr) {
          ++bad;
          continue;
        }
        bool spot = false;
        for (const auto& s : kSpotRows) {
          spot = spot || (s.range == range && s.kappa == t.kappa && s.mu == t.mu && s.n_index == k);
        }
        const double tol = spot ? 1.5 : 3.0;
        const double dp = std::abs(r->pct_quasi_prec - t.prec[k]);
        const double dc = std::abs(r->pct_quasi_chol - t.chol[k]);
        const double dz = spot ? std::abs(r->pct_zero_cov - t.zero[k]) : 0.0;
        checked += 2;
        if (dp > tol || dc > tol || dz > tol) {
          bad += static_cast<int>(dp > tol) + static_cast<int>(dc > tol) + static_cast<int>(dz > tol);
          detail += " [" + cell_name(range, t, k) +
                    fmt(": prec %.2f vs %.2f, chol %.2f vs %.2f]", r->pct_quasi_prec, t.prec[k],
                        r->pct_quasi_chol, t.chol[k]);
        }
      }
    }
  };
  check(kRange015, t1, 0.15);
  check(kRange040, t2, 0.4);
  return {bad == 0, fmt("%.0f values, %.0f outside tolerance", checked, bad) + detail};
}

Outcome criterion3() {
  const double want[2][3] = {{0.050, 0.0316, 0.0253}, {0.133, 0.084, 0.067}};
  const double ranges[2] = {0.15, 0.4};
  double worst = 0.0;
  std::string detail;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 3; ++k) {
      const double b = calibrate_matern_beta(k, 2, ranges[i]);
      worst = std::max(worst, std::abs(b - want[i][k]));
      detail += fmt(" %.4f", b);
    }
  }
  return {worst <= 0.001, fmt("max deviation %.2e; beta:", worst) + detail};
}

Outcome criterion4() {
  double worst = 0.0;
  for (double nu : {0.5, 1.5, 2.5, 3.5}) {
    for (int i = 0; i <= 400; ++i) {
      const double x = 1e-4 * std::pow(2e5, i / 400.0);
      const double a = matern_correlation(nu, 1.0, x, MaternPath::closed_form);
      const double b = matern_correlation(nu, 1.0, x, MaternPath::bessel);
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
  }
  return {worst <= 1e-9, fmt("max relative difference %.2e", worst)};
}

Outcome criterion5(Executor& exec) {
  std::vector<double> z;
  for (int i = 0; i <= 40; ++i) z.push_back(0.5 * i);
  double worst = 0.0;
  std::string detail;
  const auto t0 = std::chrono::steady_clock::now();
  for (int d : {1, 2, 3}) {
    for (double nu : {0.5, 1.5, 2.5}) {
      const double e = fourier_consistency(Matern{nu, 1.0}, d, z, exec);
      worst = std::max(worst, e);
      detail += fmt(" d%.0f/nu%.1f:%.1e", d, nu, e);
    }
  }
  const double e = fourier_consistency(Matern{2.5, 0.3}, 3, z, exec);
  worst = std::max(worst, e);
  detail += fmt(" d3/nu2.5/alpha0.3:%.1e", e);
  const double z0 = fourier_consistency(Matern{1.5, 1.0}, 2, {0.0}, exec);
  const bool ok = worst <= 1e-6 && z0 <= 1e-8;
  return {ok, fmt("max %.2e, z=0 %.1e, %.0f s;", worst, z0, seconds_since(t0)) + detail};
}

Outcome criterion6(Executor& exec) {
  const auto pts = kernel_limit_suite({}, exec);
  std::map<std::string, std::vector<const LimitPoint*>> by;
  for (const auto& p : pts) by[p.limit].push_back(&p);
  bool ok = true;
  std::string detail;
  const double gh = by["gh_to_gw"].front()->sup_distance;
  ok = ok && gh <= 1e-8;
  detail += fmt("GH->GW %.1e;", gh);
  const auto& gw = by["gw_rescaled_to_matern"];
  for (std::size_t i = 1; i < gw.size(); ++i) ok = ok && gw[i]->sup_distance < gw[i - 1]->sup_distance;
  ok = ok && gw.back()->value == 1e4 && gw.back()->sup_distance <= 5e-3;
  detail += fmt(" GW-tilde %.1e/%.1e/%.1e;", gw[0]->sup_distance, gw[1]->sup_distance, gw[2]->sup_distance);
  const auto* ch = by["ch_to_matern"].back();
  ok = ok && ch->value == 1e4 && ch->sup_distance <= 5e-3;
  detail += fmt(" CH(1e4) %.1e;", ch->sup_distance);
  const auto* ga = by["matern_to_gaussian"].back();
  ok = ok && ga->value == 1e6 && ga->sup_distance <= 1e-3;
  detail += fmt(" Gaussian(1e6) %.1e;", ga->sup_distance);
  const auto* gm = by["gh_to_matern"].back();
  detail += fmt(" GH->Matern(T=1e3) %.1e", gm->sup_distance);
  return {ok, detail};
}

Outcome criterion7() {
  double worst = 0.0;
  bool exact = true;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    CounterRng rng(t, 99);
    const int d = 1 + static_cast<int>(t % 3);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 20);
    std::vector<double> c(n * static_cast<std::size_t>(d));
    for (auto& v : c) v = rng.uniform();
    const SiteSet s(d, c);
    const double nu = 0.5 + std::floor(rng.uniform() * 3.0);
    const CovarianceModel m{Matern{nu, 0.05 + 0.5 * rng.uniform()}, 0.5 + 2.0 * rng.uniform()};
    const auto data = simulate(m, s, t, 1).front();
    std::vector<double> x0(static_cast<std::size_t>(d));
    for (auto& v : x0) v = rng.uniform();
    const auto p = krige(m, data, x0);
    const double pf = power_function(m, s, x0);
    worst = std::max(worst, std::abs(pf * pf - p.variance) / m.sigma2);
    const std::size_t i = t % n;
    const auto q = krige(m, data, s.point(i));
    exact = exact && q.mean == data.values[static_cast<Eigen::Index>(i)] && q.variance == 0.0;
  }
  return {worst <= 1e-12 && exact,
          fmt("max |power^2 - variance| / sigma2 = %.1e; observed sites exact: ", worst) +
              (exact ? "yes" : "no")};
}

Outcome criterion8() {
  double worst = 0.0;
  for (int k : {0, 1, 2}) {
    const double sigma2 = 1.7, alpha = 0.4;
    const auto m = state_space_matern(k, alpha, sigma2);
    for (int j = 1; j <= 20; ++j) {
      const double h = 0.1 * j;
      worst = std::max(worst, std::abs(state_space_autocov(m, h) -
                                       sigma2 * matern_correlation(k + 0.5, alpha, h)));
    }
  }
  return {worst <= 1e-8, fmt("max abs difference %.1e", worst)};
}

Outcome criterion9(Executor& exec) {
  std::vector<double> c;
  CounterRng rng(4, 4);
  for (int i = 0; i < 2 * 150; ++i) c.push_back(rng.uniform());
  const SiteSet s(2, c);
  const CovarianceModel m{Matern{1.5, 0.1}, 1.0};
  const auto data = simulate(m, s, 8, 1).front();
  const double exact = log_likelihood(m, data);
  const double full = vecchia_loglik(m, data, s.size() - 1, exec);
  const double rel = std::abs(full - exact) / std::abs(exact);
  double indep = 0.0;
  for (Eigen::Index i = 0; i < data.values.size(); ++i) {
    const double z = data.values[i];
    indep += -0.5 * (1.8378770664093454836 + std::log(m.sigma2) + z * z / m.sigma2);
  }
  const double zero = vecchia_loglik(m, data, 0, exec);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = vecchia_ordering_study({}, exec);
  const double secs = seconds_since(t0);
  double err[2] = {0, 0};
  for (const auto& r : rows) err[r.ordering == Ordering::maxmin ? 1 : 0] += r.abs_error;
  const bool ok = rel <= 1e-8 && zero == indep && secs < 120.0;
  return {ok, fmt("m=n-1 rel %.1e; m=0 exact: ", rel) + (zero == indep ? "yes" : "no") +
                  fmt("; study %.1f s, mean |error| natural %.3f maxmin %.3f", secs, err[0] / 50.0,
                      err[1] / 50.0)};
}

Outcome criterion10() {
  double worst = 0.0;
  for (int d : {1, 2}) {
    CounterRng rng(10, static_cast<std::uint64_t>(d));
    const std::size_t n = 40;
    std::vector<double> c(n * static_cast<std::size_t>(d));
    for (auto& v : c) v = rng.uniform();
    const SiteSet s(d, c);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = std::cos(5.0 * c[i * static_cast<std::size_t>(d)]);
    std::vector<double> x0(static_cast<std::size_t>(d), 0.437);
    for (double nu : {1.0, 1.5, 2.5}) {
      if (!(2.0 * nu > d)) continue;
      worst = std::max(worst, polyharmonic_scale_invariance(nu, s, v, x0, {0.5, 1.0, 2.0, 10.0}));
    }
  }
  return {worst <= 1e-8, fmt("max spread %.1e", worst)};
}

Outcome criterion11(Executor& exec) {
  McConfig cfg;
  cfg.fit.starts = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = ml_microergodic_mc(cfg, exec);
  const double secs = seconds_since(t0);
  const auto& s = res.summary;
  const bool dec = s[0].mean_abs_rel_error_micro > s[1].mean_abs_rel_error_micro &&
                   s[1].mean_abs_rel_error_micro > s[2].mean_abs_rel_error_micro;
  const auto& last = s.back();
  const bool law = std::abs(last.standardized_mean) <= 0.3 && last.standardized_sd >= 0.7 &&
                   last.standardized_sd <= 1.3;
  return {dec && law && secs <= 600.0,
          fmt("MARE %.4f/%.4f/%.4f", s[0].mean_abs_rel_error_micro, s[1].mean_abs_rel_error_micro,
              s[2].mean_abs_rel_error_micro) +
              fmt("; n=500 mean %.3f sd %.3f; failures %.0f; %.0f s", last.standardized_mean,
                  last.standardized_sd,
                  static_cast<double>(s[0].failures + s[1].failures + s[2].failures), secs)};
}

Outcome criterion12(Executor& exec) {
  const auto pts = screening_ratio({Matern{0.5, 1.0}, 1.0}, 1, {}, {0.2, 0.1, 0.05, 0.025, 0.0125}, exec);
  bool mono = true;
  for (std::size_t i = 1; i < pts.size(); ++i) mono = mono && pts[i].ratio >= pts[i - 1].ratio;
  const bool final_ok = pts.back().ratio >= 0.99;
  const auto st = stein_hypothesis_check(Matern{0.5, 1.0}, 1, 1.0, {10, 20, 40, 80, 160});
  bool dec = true;
  for (std::size_t i = 1; i < st.size(); ++i) dec = dec && st[i].sup_ratio_deviation < st[i - 1].sup_ratio_deviation;
  return {mono && final_ok && dec,
          fmt("ratios %.6f..%.6f, monotone: ", pts.front().ratio, pts.back().ratio) + (mono ? "yes" : "no") +
              fmt("; Stein sup %.3g -> %.3g, decreasing: ", st.front().sup_ratio_deviation,
                  st.back().sup_ratio_deviation) +
              (dec ? "yes" : "no")};
}

Outcome criterion13() {
  ThreadPool one(1);
  ThreadPool four(4);
  std::vector<std::pair<std::string, std::function<std::string(Executor&)>>> runs{
      {"sparsity",
       [](Executor& e) {
         SparsityConfig c;
         c.spacing_list = {0.05};
         return sparsity_csv(sparsity_table(c, e), "#");
       }},
      {"screening",
       [](Executor& e) {
         return screening_csv(screening_ratio({Matern{1.5, 0.5}, 1.0}, 1, {}, {0.2, 0.05}, e), "#");
       }},
      {"limits",
       [](Executor& e) {
         LimitSuiteConfig c;
         c.gauss_nu = {1e2};
         return limits_csv(kernel_limit_suite(c, e), "#");
       }},
      {"spectrum", [](Executor& e) { return fourier_csv(fourier_points(Matern{1.5, 1.0}, 2, {0, 1, 5}, e), "#"); }},
      {"mc",
       [](Executor& e) {
         McConfig c;
         c.n_list = {25, 49};
         c.reps = 8;
         c.seed = 77;
         return mc_csv(ml_microergodic_mc(c, e), "#");
       }},
      {"vecchia",
       [](Executor& e) {
         VecchiaStudyConfig c;
         c.n = 100;
         c.seeds = 4;
         c.seed = 5;
         return vecchia_csv(vecchia_ordering_study(c, e), "#");
       }},
      {"simulate",
       [](Executor& e) {
         const auto d = simulate({Matern{0.5, 0.2}, 1.0}, grid_sites(0.1, 2), 3, 2, e);
         return matrix_to_csv(d[1].values);
       }},
  };
  std::string detail;
  bool ok = true;
  for (const auto& [name, f] : runs) {
    const auto a = f(one);
    const auto b = f(four);
    const auto c = f(four);
    const bool same = a == b && b == c;
    ok = ok && same;
    detail += " " + name + (same ? ":identical" : ":DIFFERS");
  }
  return {ok, "threads {1, 4};" + detail};
}

}  // namespace

// Criterion ids may be given on the command line to run a subset.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  ThreadPool pool(hardware_threads());
  int failures = 0;
  int run = 0;
  auto report = [&](int id, const std::string& title, const std::function<Outcome()>& f) {
    const bool wanted = only.empty() || std::find(only.begin(), only.end(), id) != only.end() ||
                        (id == 1 && std::find(only.begin(), only.end(), 2) != only.end());
    if (!wanted) return;
    ++run;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  };

  TableRun t1, t2;
  report(1, "exact covariance sparsity, range 0.15", [&] {
    t1 = run_table(0.15, pool);
    return criterion1(t1);
  });
  report(2, "quasi-sparsity, ranges 0.15 and 0.4", [&] {
    t2 = run_table(0.4, pool);
    return criterion2(t1, t2);
  });
  report(3, "beta calibration", [] { return criterion3(); });
  report(4, "Matern closed form vs Bessel", [] { return criterion4(); });
  report(5, "Fourier consistency", [&] { return criterion5(pool); });
  report(6, "kernel limits", [&] { return criterion6(pool); });
  report(7, "kriging/power duality", [] { return criterion7(); });
  report(8, "state-space consistency", [] { return criterion8(); });
  report(9, "Vecchia exactness and ordering study", [&] { return criterion9(pool); });
  report(10, "polyharmonic scale invariance", [] { return criterion10(); });
  report(11, "fixed-domain Monte Carlo", [&] { return criterion11(pool); });
  report(12, "screening and Stein hypothesis", [&] { return criterion12(pool); });
  report(13, "determinism across thread counts", [] { return criterion13(); });
  std::printf("%d of %d criteria failed\n", failures, run);
  return failures == 0 ? 0 : 1;
}
