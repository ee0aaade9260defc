#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "maternlab/gp.hpp"
#include "maternlab/kernels.hpp"
#include "maternlab/linalg.hpp"

namespace matern_lab {

using nlohmann::json;

/// Bad configuration or input file; maps to exit code 2.
class ConfigError : public std::exception {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }
  const char* what() const noexcept override { return message_.c_str(); }

 private:
  std::vector<std::string> violations_;
  std::string message_;
};

/// Overlays `user` on `defaults`. Keys absent from the defaults are
/// rejected; nested objects are merged recursively except below the
/// free-form keys (kernels, bounds, explicit models).
json resolve_config(const json& defaults, const json& user);

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

/// Throws ConfigError when cfg[key] is null.
const json& required(const json& cfg, const std::string& key);

maternlab::KernelSpec kernel_from(const json& j);
/// {"kernel": {...}, "sigma2": number}
maternlab::CovarianceModel model_from(const json& j);

/// {"d": int, and exactly one of "spacing" (grid), "n" (unit design) or
/// "points" (explicit list)}.
maternlab::SiteSet sites_from(const json& j);

/// Points given as [[x1, ..., xd], ...]; plain numbers are accepted for d = 1.
std::vector<double> flat_points(const json& pts, int d, const std::string& what);

/// Either {"file": path, "replicate": r} naming a `simulate` CSV, or inline
/// {"d", "points", "values"}.
maternlab::GpDataset dataset_from(const json& j);

/// Content hash of the data file referenced by a dataset config, empty for
/// inline data.
std::string dataset_digest(const json& j);

double number_or_inf(const json& v, const std::string& what);

}  // namespace matern_lab
