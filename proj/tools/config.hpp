#pragma once

// Flat TOML-style run configuration: one `key = value` per line, `#` starts a
// comment, strings may be quoted, arrays ([a, b]) are joined with commas.
// Section headers are rejected. Keys use the long flag names; '_' and '-' are
// interchangeable.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace actspec::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FlatConfig = std::map<std::string, std::string>;

FlatConfig parse_flat_config(std::istream& is, const std::string& origin = "config");
FlatConfig load_flat_config(const std::string& path);

/// Long option names of one subcommand, mapped to whether the option is a
/// value-less flag.
using OptionShapes = std::map<std::string, bool>;

/// Inserts config values at position `insert_at` of `args` as flags for every
/// key the subcommand knows and the command line does not already set; flags
/// win over the file. A flag key takes true/false. Keys unknown to every
/// subcommand (`known_anywhere`) raise ConfigError; keys that belong to other
/// subcommands are skipped.
std::vector<std::string> apply_config(const std::vector<std::string>& args, std::size_t insert_at,
                                      const FlatConfig& config, const OptionShapes& options,
                                      const std::set<std::string>& known_anywhere);

}  // namespace actspec::cli
