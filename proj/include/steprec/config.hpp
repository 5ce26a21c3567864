#pragma once

#include <stdexcept>
#include <string>

#include "steprec/scanner.hpp"
#include "steprec/simulator.hpp"

namespace steprec {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& why)
      : std::runtime_error("config: " + field + ": " + why), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Everything a CLI run needs; omitted keys take the documented defaults.
struct RunConfig {
  Scenario scenario;
  GridSpec grid;
  RidgeThresholds ridge;
  double cost_diff_threshold = 1e-6;
};

/// Parses the flat `key = value` config format (sections in brackets,
/// '#' comments, repeatable [push] sections). Unknown sections or keys
/// are rejected.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

}  // namespace steprec
