#include "commands.hpp"

#include <cmath>
#include <cstdio>

#include "maternlab/csv.hpp"
#include "maternlab/errors.hpp"
#include "maternlab/experiments.hpp"
#include "maternlab/gp.hpp"
#include "maternlab/spectral.hpp"

namespace matern_lab {

namespace ml = maternlab;

namespace {

json matern(double nu, double alpha) {
  return {{"family", "Matern"}, {"params", {{"nu", nu}, {"alpha", alpha}}}};
}

json sites_defaults() {
  return {{"d", 1}, {"spacing", nullptr}, {"n", nullptr}, {"points", nullptr}};
}

json data_defaults() {
  return {{"file", nullptr}, {"replicate", 0}, {"d", 1}, {"points", nullptr}, {"values", nullptr}};
}

json fit_option_defaults(int starts) {
  return {{"starts", starts},
          {"max_iterations", 2000},
          {"tolerance", 1e-8},
          {"start_jitter", 0.5},
          {"jitter", "escalating"}};
}

ml::FitOptions fit_options_from(const json& j, std::uint64_t seed) {
  ml::FitOptions o;
  o.starts = j.at("starts").get<int>();
  o.max_iterations = j.at("max_iterations").get<int>();
  o.tolerance = j.at("tolerance").get<double>();
  o.start_jitter = j.at("start_jitter").get<double>();
  const auto jitter = j.at("jitter").get<std::string>();
  if (jitter == "none") {
    o.jitter = ml::JitterPolicy::none;
  } else if (jitter == "escalating") {
    o.jitter = ml::JitterPolicy::escalating;
  } else {
    throw ConfigError({"options.jitter must be \"none\" or \"escalating\""});
  }
  o.seed = seed;
  return o;
}

ml::Ordering ordering_from(const std::string& s) {
  if (s == "natural") return ml::Ordering::natural;
  if (s == "random") return ml::Ordering::random;
  if (s == "maxmin") return ml::Ordering::maxmin;
  throw ConfigError({"unknown ordering '" + s + "' (natural, random, maxmin)"});
}

std::string matrix_line(const std::string& label, std::size_t n) {
  const double mib = static_cast<double>(n) * static_cast<double>(n) * 8.0 / (1024.0 * 1024.0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: %zu x %zu dense (%.1f MiB)", label.c_str(), n, n, mib);
  return buf;
}

std::size_t grid_count(double spacing, int d) {
  const auto per_axis = static_cast<std::size_t>(std::floor(1.0 / spacing + 1e-9)) + 1;
  std::size_t n = 1;
  for (int k = 0; k < d; ++k) n *= per_axis;
  return n;
}

std::size_t site_count(const json& sites) {
  const int d = sites.at("d").get<int>();
  if (!sites.at("spacing").is_null()) return grid_count(sites.at("spacing").get<double>(), d);
  if (!sites.at("n").is_null()) return sites.at("n").get<std::size_t>();
  if (sites.at("points").is_array()) return sites.at("points").size();
  return 0;
}

std::size_t data_count(const json& data) {
  if (data.at("points").is_array()) return data.at("points").size();
  return 0;  // unknown until the file is read
}

std::string count_line(const std::string& label, std::size_t n) {
  return n == 0 ? label + ": size known after reading the input" : matrix_line(label, n);
}

std::vector<std::string> coord_columns(int d) {
  std::vector<std::string> cols;
  for (int k = 1; k <= d; ++k) cols.push_back("x" + std::to_string(k));
  return cols;
}

// eval

std::string run_eval(const json& cfg, const RunContext& ctx) {
  const auto spec = kernel_from(required(cfg, "kernel"));
  const int d = cfg.at("d").get<int>();
  ml::require_valid(spec, d);
  const bool spectral = spec.is<ml::Matern>() || spec.is<ml::GaussianKernel>();
  ml::csv::Writer w(ctx.header);
  std::vector<std::string> cols{"x", "correlation"};
  if (spectral) cols.emplace_back("spectral_density");
  w.columns(cols);
  for (const auto& xv : cfg.at("x")) {
    const double x = xv.get<double>();
    w.cell(x).cell(ml::correlation(spec, d, x));
    if (spectral) w.cell(ml::spectral_density(spec, d, x));
    w.end_row();
  }
  return w.str();
}

// simulate

std::string run_simulate(const json& cfg, const RunContext& ctx) {
  const auto model = model_from(cfg.at("model"));
  const auto sites = sites_from(cfg.at("sites"));
  const auto reps = cfg.at("replicates").get<std::size_t>();
  if (reps == 0) throw ConfigError({"replicates must be positive"});
  const auto data = ml::simulate(model, sites, ctx.seed, reps, *ctx.exec);
  ml::csv::Writer w(ctx.header);
  auto cols = coord_columns(sites.dim());
  cols.insert(cols.begin(), "replicate");
  cols.emplace_back("value");
  w.columns(cols);
  for (const auto& ds : data) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      w.cell(static_cast<long long>(ds.replicate));
      for (double c : sites.point(i)) w.cell(c);
      w.cell(ds.values[static_cast<Eigen::Index>(i)]);
      w.end_row();
    }
  }
  return w.str();
}

// fit

std::string run_fit(const json& cfg, const RunContext& ctx) {
  const auto data = dataset_from(cfg.at("data"));
  ml::FitSpec spec{kernel_from(required(cfg, "kernel")),
                   required(cfg, "free").get<std::vector<std::string>>(),
                   {}};
  for (auto it = cfg.at("bounds").begin(); it != cfg.at("bounds").end(); ++it) {
    const auto b = it.value().get<std::vector<double>>();
    if (b.size() != 2) throw ConfigError({"bounds." + it.key() + " must be [lower, upper]"});
    spec.bounds[it.key()] = {b[0], b[1]};
  }
  const auto res = ml::fit_ml(spec, data, fit_options_from(cfg.at("options"), ctx.seed));
  json out = json::parse(ml::to_json(res));
  out["failed_starts"] = res.failed_starts;
  out["n"] = data.sites.size();
  out["config_hash"] = ctx.config_hash;
  return out.dump(2) + "\n";
}

// predict

ml::CovarianceModel predict_model(const json& cfg) {
  const bool has_model = !cfg.at("model").is_null();
  const bool has_fit = !cfg.at("fit").is_null();
  if (has_model == has_fit) {
    throw ConfigError({"predict: give exactly one of 'model' or 'fit' (a fit result file)"});
  }
  if (has_model) return model_from(cfg.at("model"));
  const json fit = read_json_file(cfg.at("fit").get<std::string>());
  if (!fit.contains("theta_hat") || !fit.contains("sigma2_hat")) {
    throw ConfigError({"predict: fit file lacks theta_hat/sigma2_hat"});
  }
  return {kernel_from(fit.at("theta_hat")), fit.at("sigma2_hat").get<double>()};
}

std::string run_predict(const json& cfg, const RunContext& ctx) {
  const auto model = predict_model(cfg);
  const auto data = dataset_from(cfg.at("data"));
  const int d = data.sites.dim();
  ml::require_valid(model.kernel, d);
  const auto targets = flat_points(required(cfg, "targets"), d, "targets");
  const std::size_t m = targets.size() / static_cast<std::size_t>(d);
  std::vector<ml::Prediction> preds(m);
  ctx.exec->parallel_for(m, [&](std::size_t i) {
    preds[i] = ml::krige(model, data, {targets.data() + i * static_cast<std::size_t>(d),
                                       static_cast<std::size_t>(d)});
  });
  ml::csv::Writer w(ctx.header);
  auto cols = coord_columns(d);
  cols.emplace_back("mean");
  cols.emplace_back("variance");
  w.columns(cols);
  for (std::size_t i = 0; i < m; ++i) {
    for (int k = 0; k < d; ++k) w.cell(targets[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)]);
    w.cell(preds[i].mean).cell(preds[i].variance);
    w.end_row();
  }
  return w.str();
}

// vecchia

ml::VecchiaStudyConfig vecchia_config(const json& cfg, std::uint64_t seed) {
  ml::VecchiaStudyConfig c;
  c.model = model_from(cfg.at("model"));
  c.d = cfg.at("d").get<int>();
  c.n = cfg.at("n").get<std::size_t>();
  c.m = cfg.at("m").get<std::size_t>();
  c.seeds = cfg.at("seeds").get<std::size_t>();
  c.seed = seed;
  c.orderings.clear();
  for (const auto& o : cfg.at("orderings")) c.orderings.push_back(ordering_from(o.get<std::string>()));
  return c;
}

std::string run_vecchia(const json& cfg, const RunContext& ctx) {
  return ml::vecchia_csv(ml::vecchia_ordering_study(vecchia_config(cfg, ctx.seed), *ctx.exec),
                         ctx.header);
}

// sparsity

ml::SparsityConfig sparsity_config(const json& cfg) {
  ml::SparsityConfig c;
  c.kappa_list = cfg.at("kappa").get<std::vector<double>>();
  c.mu_list.clear();
  for (const auto& v : cfg.at("mu")) c.mu_list.push_back(number_or_inf(v, "mu"));
  c.include_boundary_mu = cfg.at("include_boundary_mu").get<bool>();
  c.target_range = cfg.at("target_range").get<double>();
  c.spacing_list = cfg.at("spacing").get<std::vector<double>>();
  c.epsilon = cfg.at("epsilon").get<double>();
  c.d = cfg.at("d").get<int>();
  return c;
}

std::string run_sparsity(const json& cfg, const RunContext& ctx) {
  return ml::sparsity_csv(ml::sparsity_table(sparsity_config(cfg), *ctx.exec), ctx.header);
}

// screening

std::string run_screening(const json& cfg, const RunContext& ctx) {
  const auto model = model_from(cfg.at("model"));
  const int d = cfg.at("d").get<int>();
  const auto mode = cfg.at("mode").get<std::string>();
  if (mode == "ratio") {
    ml::ScreeningScheme scheme;
    scheme.offset = cfg.at("offset").get<std::vector<double>>();
    scheme.near_count = cfg.at("near_count").get<std::size_t>();
    scheme.truncation = cfg.at("truncation").get<double>();
    const auto eps = cfg.at("epsilon").get<std::vector<double>>();
    return ml::screening_csv(ml::screening_ratio(model, d, scheme, eps, *ctx.exec), ctx.header);
  }
  if (mode == "stein") {
    const auto& s = cfg.at("stein");
    const auto pts = ml::stein_hypothesis_check(
        model.kernel, d, s.at("radius").get<double>(), s.at("omega").get<std::vector<double>>(),
        s.at("directions").get<int>(), s.at("radii").get<int>());
    return ml::stein_csv(pts, ctx.header);
  }
  throw ConfigError({"screening.mode must be \"ratio\" or \"stein\""});
}

// limits

std::string run_limits(const json& cfg, const RunContext& ctx) {
  ml::LimitSuiteConfig c;
  c.d = cfg.at("d").get<int>();
  c.grid = cfg.at("grid").get<std::vector<double>>();
  const auto& gw = cfg.at("gw");
  c.gw_kappa = gw.at("kappa").get<double>();
  c.gw_beta = gw.at("beta").get<double>();
  c.gw_mu = gw.at("mu").get<std::vector<double>>();
  const auto& ch = cfg.at("ch");
  c.ch_nu = ch.at("nu").get<double>();
  c.ch_beta = ch.at("beta").get<double>();
  c.ch_eta = ch.at("eta").get<std::vector<double>>();
  const auto& ga = cfg.at("gauss");
  c.gauss_alpha = ga.at("alpha").get<double>();
  c.gauss_nu = ga.at("nu").get<std::vector<double>>();
  const auto& gh = cfg.at("gh");
  c.gh_kappa = gh.at("kappa").get<double>();
  c.gh_mu = gh.at("mu").get<double>();
  c.gh_beta = gh.at("beta").get<double>();
  const auto& gm = cfg.at("gh_matern");
  c.gh_matern_kappa = gm.at("kappa").get<double>();
  c.gh_matern_alpha = gm.at("alpha").get<double>();
  c.gh_matern_t = gm.at("t").get<std::vector<double>>();
  return ml::limits_csv(ml::kernel_limit_suite(c, *ctx.exec), ctx.header);
}

// spectrum

std::string run_spectrum(const json& cfg, const RunContext& ctx) {
  const auto spec = kernel_from(required(cfg, "kernel"));
  const int d = cfg.at("d").get<int>();
  const auto z = cfg.at("z").get<std::vector<double>>();
  return ml::fourier_csv(ml::fourier_points(spec, d, z, *ctx.exec), ctx.header);
}

// mc

std::string run_mc(const json& cfg, const RunContext& ctx) {
  ml::McConfig c;
  c.true_model = model_from(cfg.at("model"));
  c.d = cfg.at("d").get<int>();
  c.n_list = cfg.at("n").get<std::vector<std::size_t>>();
  const auto reps = cfg.at("reps").get<long long>();
  if (reps <= 0) throw ConfigError({"reps must be positive"});
  c.reps = static_cast<std::size_t>(reps);
  c.free = cfg.at("free").get<std::vector<std::string>>();
  c.fit = fit_options_from(cfg.at("options"), ctx.seed);
  c.seed = ctx.seed;
  const auto table = cfg.at("table").get<std::string>();
  if (table != "summary" && table != "replicates") {
    throw ConfigError({"mc.table must be \"summary\" or \"replicates\""});
  }
  const auto res = ml::ml_microergodic_mc(c, *ctx.exec);
  return table == "summary" ? ml::mc_summary_csv(res, ctx.header) : ml::mc_csv(res, ctx.header);
}

// ssm-check

std::string run_ssm(const json& cfg, const RunContext& ctx) {
  const auto ks = cfg.at("k").get<std::vector<int>>();
  const double alpha = cfg.at("alpha").get<double>();
  const double sigma2 = cfg.at("sigma2").get<double>();
  const int lags = cfg.at("lags").get<int>();
  const double max_lag = cfg.at("max_lag").get<double>();
  if (lags < 1 || !(max_lag > 0.0)) throw ConfigError({"lags and max_lag must be positive"});
  ml::csv::Writer w(ctx.header);
  w.columns({"k", "lag", "state_space", "matern", "abs_error"});
  for (int k : ks) {
    const auto model = ml::state_space_matern(k, alpha, sigma2);
    for (int j = 1; j <= lags; ++j) {
      const double h = max_lag * j / lags;
      const double a = ml::state_space_autocov(model, h);
      const double b = sigma2 * ml::matern_correlation(k + 0.5, alpha, h);
      w.cell(static_cast<long long>(k)).cell(h).cell(a).cell(b).cell(std::abs(a - b));
      w.end_row();
    }
  }
  return w.str();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

std::vector<Command> make_commands() {
  std::vector<Command> cmds;
  cmds.push_back({"eval", "Evaluate a correlation (and closed-form spectral density) on a grid",
                  {{"kernel", nullptr}, {"d", 1}, {"x", {0.0, 0.5, 1.0, 2.0}}}, run_eval,
                  [](const json&) { return std::vector<std::string>{"no dense matrices"}; }});
  cmds.push_back({"simulate", "Draw Gaussian random field replicates by Cholesky",
                  {{"model", {{"kernel", nullptr}, {"sigma2", 1.0}}},
                   {"sites", sites_defaults()},
                   {"replicates", 1}},
                  run_simulate,
                  [](const json& c) {
                    return std::vector<std::string>{count_line("covariance", site_count(c.at("sites")))};
                  }});
  cmds.push_back({"fit", "Concentrated maximum likelihood fit",
                  {{"data", data_defaults()},
                   {"kernel", nullptr},
                   {"free", nullptr},
                   {"bounds", json::object()},
                   {"options", fit_option_defaults(3)}},
                  run_fit,
                  [](const json& c) {
                    return std::vector<std::string>{
                        count_line("correlation (per likelihood evaluation)", data_count(c.at("data")))};
                  }});
  cmds.push_back({"predict", "Simple kriging mean and variance at target locations",
                  {{"model", nullptr}, {"fit", nullptr}, {"data", data_defaults()}, {"targets", nullptr}},
                  run_predict,
                  [](const json& c) {
                    return std::vector<std::string>{count_line("covariance", data_count(c.at("data")))};
                  }});
  cmds.push_back({"vecchia", "Vecchia approximation error under site orderings",
                  {{"model", {{"kernel", matern(0.5, 0.3)}, {"sigma2", 1.0}}},
                   {"d", 2},
                   {"n", 400},
                   {"m", 10},
                   {"seeds", 50},
                   {"orderings", {"natural", "maxmin"}}},
                  run_vecchia,
                  [](const json& c) {
                    const auto m = c.at("m").get<std::size_t>() + 1;
                    return std::vector<std::string>{
                        matrix_line("exact likelihood covariance", c.at("n").get<std::size_t>()),
                        matrix_line("conditioning block (per site)", m)};
                  }});
  cmds.push_back({"sparsity", "Exact and quasi-sparsity of covariance, precision and Cholesky factor",
                  {{"kappa", {0.0, 1.0, 2.0}},
                   {"mu", {4.0, 8.0, 16.0, 32.0, 120.0, "inf"}},
                   {"include_boundary_mu", true},
                   {"target_range", 0.15},
                   {"spacing", {0.03, 0.015}},
                   {"epsilon", 1e-8},
                   {"d", 2}},
                  run_sparsity,
                  [](const json& c) {
                    std::vector<std::string> out;
                    const int d = c.at("d").get<int>();
                    for (const auto& h : c.at("spacing")) {
                      out.push_back(matrix_line("covariance, precision, factor each",
                                                grid_count(h.get<double>(), d)));
                    }
                    return out;
                  }});
  cmds.push_back({"screening", "Screening-effect MSE ratios or the spectral tail hypothesis",
                  {{"mode", "ratio"},
                   {"model", {{"kernel", matern(0.5, 1.0)}, {"sigma2", 1.0}}},
                   {"d", 1},
                   {"offset", {0.3}},
                   {"near_count", 4},
                   {"truncation", 1.0},
                   {"epsilon", {0.2, 0.1, 0.05, 0.025, 0.0125}},
                   {"stein",
                    {{"radius", 1.0},
                     {"omega", {10.0, 20.0, 40.0, 80.0, 160.0}},
                     {"directions", 32},
                     {"radii", 8}}}},
                  run_screening,
                  [](const json& c) {
                    std::vector<std::string> out;
                    if (c.at("mode") != "ratio") return std::vector<std::string>{"no dense matrices"};
                    const int d = c.at("d").get<int>();
                    const double t = c.at("truncation").get<double>();
                    for (const auto& e : c.at("epsilon")) {
                      const auto per_axis = static_cast<std::size_t>(2.0 * t / e.get<double>()) + 1;
                      std::size_t n = 1;
                      for (int k = 0; k < d; ++k) n *= per_axis;
                      out.push_back(matrix_line("lattice covariance (about)", n));
                    }
                    return out;
                  }});
  cmds.push_back({"limits", "Sup distances along the kernel limit relations",
                  {{"d", 1},
                   {"grid", json::array()},
                   {"gw", {{"kappa", 1.0}, {"beta", 1.0}, {"mu", {1e2, 1e3, 1e4}}}},
                   {"ch", {{"nu", 0.5}, {"beta", 1.0}, {"eta", {1e2, 1e3, 1e4}}}},
                   {"gauss", {{"alpha", 1.0}, {"nu", {1e2, 1e4, 1e6}}}},
                   {"gh", {{"kappa", 1.0}, {"mu", 5.0}, {"beta", 1.0}}},
                   {"gh_matern", {{"kappa", 1.5}, {"alpha", 0.5}, {"t", {10.0, 100.0, 1000.0}}}}},
                  run_limits,
                  [](const json&) { return std::vector<std::string>{"no dense matrices"}; }});
  cmds.push_back({"spectrum", "Closed-form spectral density against the numerical radial transform",
                  {{"kernel", matern(1.5, 1.0)}, {"d", 1}, {"z", linspace(0.0, 20.0, 41)}},
                  run_spectrum,
                  [](const json&) { return std::vector<std::string>{"no dense matrices"}; }});
  cmds.push_back({"mc", "Fixed-domain Monte Carlo for the microergodic parameter",
                  {{"model", {{"kernel", matern(0.5, 0.1)}, {"sigma2", 1.0}}},
                   {"d", 1},
                   {"n", {125, 250, 500}},
                   {"reps", 200},
                   {"free", {"alpha"}},
                   {"options", fit_option_defaults(1)},
                   {"table", "summary"}},
                  run_mc,
                  [](const json& c) {
                    std::vector<std::string> out;
                    for (const auto& n : c.at("n")) {
                      out.push_back(matrix_line("correlation (per likelihood evaluation)",
                                                n.get<std::size_t>()));
                    }
                    return out;
                  }});
  cmds.push_back({"ssm-check", "State-space autocovariance against the Matern closed form",
                  {{"k", {0, 1, 2}}, {"alpha", 0.5}, {"sigma2", 1.0}, {"lags", 20}, {"max_lag", 2.0}},
                  run_ssm,
                  [](const json&) { return std::vector<std::string>{"no dense matrices"}; }});
  return cmds;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = make_commands();
  return cmds;
}

std::string canonical_config(const std::string& name, std::uint64_t seed, const json& resolved) {
  json c{{"subcommand", name}, {"seed", seed}, {"config", resolved}};
  if (resolved.contains("data") && resolved.at("data").is_object()) {
    const auto digest = dataset_digest(resolved.at("data"));
    if (!digest.empty()) c["data_digest"] = digest;
  }
  if (resolved.contains("fit") && resolved.at("fit").is_string()) {
    c["fit_digest"] = ml::csv::hash_hex(read_text_file(resolved.at("fit").get<std::string>()));
  }
  return c.dump();
}

}  // namespace matern_lab
