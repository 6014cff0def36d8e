#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chdg/time_stepper.hpp"

namespace chdg {

struct ConfigError : std::runtime_error {
  std::vector<std::string> errors;
  explicit ConfigError(std::vector<std::string> msgs)
      : std::runtime_error(join(msgs)), errors(std::move(msgs)) {}

 private:
  static std::string join(const std::vector<std::string>& msgs) {
    std::string out;
    for (const auto& m : msgs) {
      if (!out.empty()) out += "; ";
      out += m;
    }
    return out;
  }
};

struct Config {
  ModelParams params;
  int n = 0;
  int test_case = 1;
  int dump_every = 10;
  std::string output_dir = "out";
  std::vector<int> n_list;     // converge subcommand
  int reference_n = 0;         // converge subcommand
  double snapshot_time = 0.0;  // spectrum subcommand

  bool operator==(const Config& other) const;
};

/// Parse a flat JSON object, apply `key=value` overrides, validate. All
/// validation failures are collected into one ConfigError. Unknown keys are
/// rejected. With strict=true the implicit-scheme k > epsilon^3 warning
/// becomes an error; otherwise it goes to `warnings`.
Config parse_config(const std::string& file_path, const std::vector<std::string>& overrides,
                    bool strict, std::vector<std::string>* warnings = nullptr);

/// Parse from a JSON string (same rules); empty string means all defaults.
Config parse_config_text(const std::string& json_text, const std::vector<std::string>& overrides,
                         bool strict, std::vector<std::string>* warnings = nullptr);

std::string emit_config(const Config& config);

}  // namespace chdg
