#include <cmath>
#include <map>

#include "json.hpp"
#include "maternlab/errors.hpp"
#include "maternlab/kernels.hpp"

namespace maternlab {

namespace {

using nlohmann::json;

class ParamReader {
 public:
  ParamReader(const json& params, std::string family)
      : params_(params), family_(std::move(family)) {}

  double get(const char* name) {
    used_.push_back(name);
    if (!params_.contains(name)) {
      throw ValidationError({family_ + ": missing parameter '" + name + "'"});
    }
    const auto& v = params_.at(name);
    if (!v.is_number()) throw ValidationError({family_ + ": parameter '" + name + "' must be a number"});
    return v.get<double>();
  }

  int get_int(const char* name) {
    const double v = get(name);
    if (v != std::round(v)) {
      throw ValidationError({family_ + ": parameter '" + std::string(name) + "' must be an integer"});
    }
    return static_cast<int>(v);
  }

  void finish() const {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : params_.items()) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        unknown.push_back(family_ + ": unknown parameter '" + k + "'");
      }
    }
    if (!unknown.empty()) throw ValidationError(std::move(unknown));
  }

 private:
  const json& params_;
  std::string family_;
  std::vector<std::string> used_;
};

KernelSpec from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ValidationError({"kernel JSON must be an object with a string 'family'"});
  }
  const std::string family = j.at("family").get<std::string>();
  if (family == "Tapered") {
    if (!j.contains("base") || !j.contains("taper")) {
      throw ValidationError({"Tapered: 'base' and 'taper' kernel objects required"});
    }
    return taper(from_json(j.at("base")), from_json(j.at("taper")));
  }
  static const json empty = json::object();
  const json& params = j.contains("params") ? j.at("params") : empty;
  if (!params.is_object()) throw ValidationError({family + ": 'params' must be an object"});
  ParamReader r(params, family);
  auto done = [&](KernelSpec s) {
    r.finish();
    return s;
  };
  if (family == "Matern") return done(Matern{r.get("nu"), r.get("alpha")});
  if (family == "GaussianKernel") return done(GaussianKernel{r.get("alpha")});
  if (family == "Askey") return done(Askey{r.get("mu"), r.get("beta")});
  if (family == "GenWendland") return done(GenWendland{r.get("kappa"), r.get("mu"), r.get("beta")});
  if (family == "GenWendlandRescaled") {
    return done(GenWendlandRescaled{r.get("kappa"), r.get("mu"), r.get("beta")});
  }
  if (family == "GaussHypergeometric") {
    return done(GaussHypergeometric{r.get("kappa"), r.get("delta"), r.get("gamma_p"),
                                    r.get("beta"), r.get_int("d_ref")});
  }
  if (family == "ConfluentHypergeometric") {
    return done(ConfluentHypergeometric{r.get("nu"), r.get("eta"), r.get("beta")});
  }
  if (family == "Polyharmonic") return done(Polyharmonic{r.get("nu"), r.get_int("d_ref")});
  if (family == "SpaceTimeGneiting") {
    return done(
        SpaceTimeGneiting{r.get("nu"), r.get("alpha"), r.get("psi_a"), r.get("psi_lambda")});
  }
  if (family == "PaciorekNS") {
    throw UnsupportedFamily("PaciorekNS carries a callable anisotropy field and has no JSON form");
  }
  throw UnsupportedFamily("unknown kernel family '" + family + "'");
}

json to_json_value(const KernelSpec& spec) {
  json j;
  j["family"] = spec.family();
  json& p = j["params"];
  p = json::object();
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Matern>) {
          p["nu"] = k.nu;
          p["alpha"] = k.alpha;
        } else if constexpr (std::is_same_v<T, GaussianKernel>) {
          p["alpha"] = k.alpha;
        } else if constexpr (std::is_same_v<T, Askey>) {
          p["mu"] = k.mu;
          p["beta"] = k.beta;
        } else if constexpr (std::is_same_v<T, GenWendland> ||
                             std::is_same_v<T, GenWendlandRescaled>) {
          p["kappa"] = k.kappa;
          p["mu"] = k.mu;
          p["beta"] = k.beta;
        } else if constexpr (std::is_same_v<T, GaussHypergeometric>) {
          p["kappa"] = k.kappa;
          p["delta"] = k.delta;
          p["gamma_p"] = k.gamma_p;
          p["beta"] = k.beta;
          p["d_ref"] = k.d_ref;
        } else if constexpr (std::is_same_v<T, ConfluentHypergeometric>) {
          p["nu"] = k.nu;
          p["eta"] = k.eta;
          p["beta"] = k.beta;
        } else if constexpr (std::is_same_v<T, Polyharmonic>) {
          p["nu"] = k.nu;
          p["d_ref"] = k.d_ref;
        } else if constexpr (std::is_same_v<T, SpaceTimeGneiting>) {
          p["nu"] = k.nu;
          p["alpha"] = k.alpha;
          p["psi_a"] = k.psi_a;
          p["psi_lambda"] = k.psi_lambda;
        } else if constexpr (std::is_same_v<T, Tapered>) {
          j.erase("params");
          j["base"] = to_json_value(*k.base);
          j["taper"] = to_json_value(*k.taper);
        } else {
          throw UnsupportedFamily("PaciorekNS carries a callable anisotropy field and has no JSON form");
        }
      },
      spec.value);
  return j;
}

}  // namespace

KernelSpec kernel_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("kernel JSON does not parse: ") + e.what()});
  }
  return from_json(j);
}

std::string kernel_to_json(const KernelSpec& spec) { return to_json_value(spec).dump(); }

}  // namespace maternlab
