#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "maternlab/csv.hpp"
#include "maternlab/errors.hpp"
#include "maternlab/experiments.hpp"

namespace matern_lab {

namespace {

const std::set<std::string> kFreeForm{"kernel", "bounds"};

void merge_into(json& out, const json& user, const std::string& path,
                std::vector<std::string>& violations) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string where = path.empty() ? it.key() : path + "." + it.key();
    if (!out.contains(it.key())) {
      violations.push_back("unknown key '" + where + "'");
      continue;
    }
    json& slot = out[it.key()];
    if (slot.is_object() && it.value().is_object() && !kFreeForm.contains(it.key())) {
      merge_into(slot, it.value(), where, violations);
    } else {
      slot = it.value();
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : violations_(std::move(violations)) {
  message_ = "invalid configuration";
  for (const auto& v : violations_) message_ += "; " + v;
}

json resolve_config(const json& defaults, const json& user) {
  if (!user.is_null() && !user.is_object()) throw ConfigError({"config must be a JSON object"});
  json out = defaults;
  std::vector<std::string> violations;
  if (user.is_object()) merge_into(out, user, "", violations);
  if (!violations.empty()) throw ConfigError(violations);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError({"'" + path + "' is not valid JSON: " + e.what()});
  }
}

const json& required(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || cfg.at(key).is_null()) {
    throw ConfigError({"missing required key '" + key + "'"});
  }
  return cfg.at(key);
}

maternlab::KernelSpec kernel_from(const json& j) {
  if (!j.is_object()) throw ConfigError({"kernel must be an object {\"family\", \"params\"}"});
  return maternlab::kernel_from_json(j.dump());
}

maternlab::CovarianceModel model_from(const json& j) {
  if (!j.is_object()) throw ConfigError({"model must be an object {\"kernel\", \"sigma2\"}"});
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "kernel" && it.key() != "sigma2") {
      throw ConfigError({"unknown key 'model." + it.key() + "'"});
    }
  }
  maternlab::CovarianceModel m{kernel_from(required(j, "kernel")), 1.0};
  if (j.contains("sigma2")) m.sigma2 = j.at("sigma2").get<double>();
  if (!(m.sigma2 > 0.0)) throw ConfigError({"sigma2 must be positive"});
  return m;
}

std::vector<double> flat_points(const json& pts, int d, const std::string& what) {
  if (!pts.is_array()) throw ConfigError({what + " must be an array of points"});
  std::vector<double> coords;
  coords.reserve(pts.size() * static_cast<std::size_t>(d));
  for (const auto& p : pts) {
    if (p.is_number() && d == 1) {
      coords.push_back(p.get<double>());
      continue;
    }
    if (!p.is_array() || p.size() != static_cast<std::size_t>(d)) {
      throw ConfigError({what + ": every point needs exactly d = " + std::to_string(d) +
                         " coordinates"});
    }
    for (const auto& c : p) coords.push_back(c.get<double>());
  }
  return coords;
}

maternlab::SiteSet sites_from(const json& j) {
  const int d = j.at("d").get<int>();
  if (d < 1 || d > 3) throw ConfigError({"sites.d must be 1, 2 or 3"});
  const int given = static_cast<int>(!j.at("spacing").is_null()) +
                    static_cast<int>(!j.at("n").is_null()) +
                    static_cast<int>(!j.at("points").is_null());
  if (given != 1) throw ConfigError({"sites: give exactly one of 'spacing', 'n' or 'points'"});
  if (!j.at("spacing").is_null()) {
    const double h = j.at("spacing").get<double>();
    if (!(h > 0.0 && h <= 1.0)) throw ConfigError({"sites.spacing must lie in (0, 1]"});
    return maternlab::grid_sites(h, d);
  }
  if (!j.at("n").is_null()) return maternlab::unit_design(j.at("n").get<std::size_t>(), d);
  return maternlab::SiteSet(d, flat_points(j.at("points"), d, "sites.points"));
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  std::istringstream ss(s);
  ss.imbue(std::locale::classic());
  double v = 0.0;
  if (!(ss >> v)) throw ConfigError({where + ": '" + s + "' is not a number"});
  return v;
}

// Reads a CSV written by `simulate`: columns replicate, x1..xd, value.
maternlab::GpDataset dataset_from_csv(const std::string& path, std::size_t replicate) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<std::string> cols;
  std::vector<double> coords;
  std::vector<double> values;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (cols.empty()) {
      cols = split(line);
      if (cols.size() < 3 || cols.front() != "replicate" || cols.back() != "value") {
        throw ConfigError({path + ": expected columns replicate,x1..xd,value"});
      }
      continue;
    }
    const auto cells = split(line);
    const std::string where = path + ":" + std::to_string(lineno);
    if (cells.size() != cols.size()) throw ConfigError({where + ": wrong number of columns"});
    if (static_cast<std::size_t>(parse_double(cells[0], where)) != replicate) continue;
    for (std::size_t k = 1; k + 1 < cells.size(); ++k) coords.push_back(parse_double(cells[k], where));
    values.push_back(parse_double(cells.back(), where));
  }
  if (values.empty()) {
    throw ConfigError({path + ": no rows for replicate " + std::to_string(replicate)});
  }
  const int d = static_cast<int>(cols.size()) - 2;
  maternlab::GpDataset data;
  data.sites = maternlab::SiteSet(d, std::move(coords));
  data.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  data.replicate = replicate;
  return data;
}

}  // namespace

maternlab::GpDataset dataset_from(const json& j) {
  if (!j.at("file").is_null()) {
    if (!j.at("points").is_null() || !j.at("values").is_null()) {
      throw ConfigError({"data: give either 'file' or inline 'points'/'values', not both"});
    }
    return dataset_from_csv(j.at("file").get<std::string>(), j.at("replicate").get<std::size_t>());
  }
  const int d = j.at("d").get<int>();
  const auto coords = flat_points(required(j, "points"), d, "data.points");
  const auto vals = required(j, "values").get<std::vector<double>>();
  if (vals.size() * static_cast<std::size_t>(d) != coords.size()) {
    throw ConfigError({"data: one value per point required"});
  }
  maternlab::GpDataset data;
  data.sites = maternlab::SiteSet(d, coords);
  data.values = Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  return data;
}

std::string dataset_digest(const json& j) {
  if (j.at("file").is_null()) return {};
  return maternlab::csv::hash_hex(read_text_file(j.at("file").get<std::string>()));
}

double number_or_inf(const json& v, const std::string& what) {
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ConfigError({what + ": expected a number or \"inf\""});
  return v.get<double>();
}

}  // namespace matern_lab
