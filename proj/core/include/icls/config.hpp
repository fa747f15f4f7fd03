#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "icls/experiment.hpp"

namespace icls {

// Raised for unknown keys, malformed values and constraint violations. The
// message names the offending key and, where known, the line number.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat INI-style key/value text with [channel], [deployment], [frame],
// [detector] and [experiment] sections; keys mirror the struct field names
// in lower_snake_case. '#' and ';' start comments. An empty document yields
// the full default configuration. Every parsed value is validated and
// errors carry key and line.
ExperimentConfig parse_config(std::string_view text);

// Reads and parses a config file. Throws ConfigError if unreadable.
ExperimentConfig load_config_file(const std::string& path);

// The default configuration rendered as a commented config file.
std::string default_config_text();

}  // namespace icls
