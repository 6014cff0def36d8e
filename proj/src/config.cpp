#include "chdg/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace chdg {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "epsilon",     "k",          "T",         "sigma0",          "degree",
    "scheme",      "newton_tol", "newton_max_iter", "init_projection", "n",
    "test_case",   "dump_every", "output_dir", "n_list",         "reference_n",
    "snapshot_time"};

json apply_override(json obj, const std::string& kv, std::vector<std::string>& errors) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) {
    errors.push_back("override '" + kv + "' is not of the form key=value");
    return obj;
  }
  const std::string key = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);
  // parse the value as JSON when possible (numbers, arrays), else as string
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  obj[key] = parsed;
  return obj;
}

Config build_config(const json& obj, bool strict, std::vector<std::string>* warnings) {
  std::vector<std::string> errors;
  Config cfg;

  if (!obj.is_object()) {
    throw ConfigError({"config must be a flat JSON object"});
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (kKnownKeys.find(key) == kKnownKeys.end()) errors.push_back("unknown key '" + key + "'");
  }

  auto get_double = [&](const char* key, double def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number()) {
      errors.push_back(std::string("key '") + key + "' must be a number");
      return def;
    }
    return obj[key].get<double>();
  };
  auto get_int = [&](const char* key, int def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number_integer()) {
      errors.push_back(std::string("key '") + key + "' must be an integer");
      return def;
    }
    return obj[key].get<int>();
  };
  auto get_string = [&](const char* key, const std::string& def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_string()) {
      errors.push_back(std::string("key '") + key + "' must be a string");
      return def;
    }
    return obj[key].get<std::string>();
  };

  cfg.params.epsilon = get_double("epsilon", 0.1);
  cfg.params.k = get_double("k", 1e-5);
  cfg.params.T = get_double("T", 1e-4);
  cfg.params.degree = get_int("degree", 1);
  cfg.params.sigma0 =
      get_double("sigma0", 10.0 * cfg.params.degree * (cfg.params.degree + 1));
  cfg.params.newton_tol = get_double("newton_tol", 1e-10);
  cfg.params.newton_max_iter = get_int("newton_max_iter", 50);

  const std::string scheme = get_string("scheme", "splitting");
  if (scheme == "splitting") {
    cfg.params.scheme = NonlinearVariant::splitting;
  } else if (scheme == "implicit") {
    cfg.params.scheme = NonlinearVariant::implicit;
  } else {
    errors.push_back("scheme must be 'splitting' or 'implicit', got '" + scheme + "'");
  }

  const std::string proj = get_string("init_projection", "l2_continuous");
  if (proj == "l2_continuous") {
    cfg.params.init_projection = InitProjection::l2_continuous;
  } else if (proj == "elliptic_continuous") {
    cfg.params.init_projection = InitProjection::elliptic_continuous;
  } else {
    errors.push_back("init_projection must be 'l2_continuous' or 'elliptic_continuous'");
  }

  cfg.n = get_int("n", 20);
  cfg.test_case = get_int("test_case", 1);
  cfg.dump_every = get_int("dump_every", 10);
  cfg.output_dir = get_string("output_dir", "out");
  cfg.reference_n = get_int("reference_n", 0);
  cfg.snapshot_time = get_double("snapshot_time", 0.0);
  if (obj.contains("n_list")) {
    if (!obj["n_list"].is_array()) {
      errors.push_back("key 'n_list' must be an array of integers");
    } else {
      for (const auto& v : obj["n_list"]) {
        if (!v.is_number_integer()) {
          errors.push_back("key 'n_list' must contain only integers");
          break;
        }
        cfg.n_list.push_back(v.get<int>());
      }
    }
  }

  if (!(cfg.params.epsilon > 0.0)) errors.push_back("epsilon must be positive");
  if (!(cfg.params.k > 0.0)) errors.push_back("k must be positive");
  if (cfg.params.T < 0.0) errors.push_back("T must be nonnegative");
  if (!(cfg.params.sigma0 > 0.0)) errors.push_back("sigma0 must be positive");
  if (cfg.params.degree < 1) errors.push_back("degree must be >= 1");
  if (!(cfg.params.newton_tol > 0.0)) errors.push_back("newton_tol must be positive");
  if (cfg.params.newton_max_iter < 1) errors.push_back("newton_max_iter must be >= 1");
  if (cfg.n < 1) errors.push_back("n must be >= 1");
  if (cfg.test_case < 1 || cfg.test_case > 3) errors.push_back("test_case must be 1, 2 or 3");
  if (cfg.dump_every < 1) errors.push_back("dump_every must be >= 1");

  if (cfg.params.scheme == NonlinearVariant::implicit &&
      cfg.params.k > std::pow(cfg.params.epsilon, 3)) {
    const std::string msg = "k exceeds epsilon^3: the implicit scheme is only "
                            "conditionally stable";
    if (strict) {
      errors.push_back(msg);
    } else if (warnings) {
      warnings->push_back(msg);
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

}  // namespace

bool Config::operator==(const Config& other) const {
  return params.epsilon == other.params.epsilon && params.k == other.params.k &&
         params.T == other.params.T && params.sigma0 == other.params.sigma0 &&
         params.degree == other.params.degree && params.scheme == other.params.scheme &&
         params.newton_tol == other.params.newton_tol &&
         params.newton_max_iter == other.params.newton_max_iter &&
         params.init_projection == other.params.init_projection && n == other.n &&
         test_case == other.test_case && dump_every == other.dump_every &&
         output_dir == other.output_dir && n_list == other.n_list &&
         reference_n == other.reference_n && snapshot_time == other.snapshot_time;
}

Config parse_config_text(const std::string& json_text, const std::vector<std::string>& overrides,
                         bool strict, std::vector<std::string>* warnings) {
  json obj = json::object();
  if (!json_text.empty()) {
    try {
      obj = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError({std::string("malformed JSON: ") + e.what()});
    }
  }
  std::vector<std::string> override_errors;
  for (const auto& kv : overrides) obj = apply_override(obj, kv, override_errors);
  if (!override_errors.empty()) throw ConfigError(std::move(override_errors));
  return build_config(obj, strict, warnings);
}

Config parse_config(const std::string& file_path, const std::vector<std::string>& overrides,
                    bool strict, std::vector<std::string>* warnings) {
  std::ifstream in(file_path);
  if (!in) throw ConfigError({"cannot open config file '" + file_path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides, strict, warnings);
}

std::string emit_config(const Config& config) {
  json obj;
  obj["epsilon"] = config.params.epsilon;
  obj["k"] = config.params.k;
  obj["T"] = config.params.T;
  obj["sigma0"] = config.params.sigma0;
  obj["degree"] = config.params.degree;
  obj["scheme"] =
      config.params.scheme == NonlinearVariant::splitting ? "splitting" : "implicit";
  obj["newton_tol"] = config.params.newton_tol;
  obj["newton_max_iter"] = config.params.newton_max_iter;
  obj["init_projection"] = config.params.init_projection == InitProjection::l2_continuous
                               ? "l2_continuous"
                               : "elliptic_continuous";
  obj["n"] = config.n;
  obj["test_case"] = config.test_case;
  obj["dump_every"] = config.dump_every;
  obj["output_dir"] = config.output_dir;
  if (!config.n_list.empty()) obj["n_list"] = config.n_list;
  if (config.reference_n != 0) obj["reference_n"] = config.reference_n;
  if (config.snapshot_time != 0.0) obj["snapshot_time"] = config.snapshot_time;
  return obj.dump(2);
}

}  // namespace chdg
