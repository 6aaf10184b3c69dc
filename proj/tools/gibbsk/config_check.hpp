#pragma once

#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace gibbsk::cli {

struct ConfigEntry {
  std::string section;  // subcommand name, empty for top level
  std::string key;
  int line = 0;
};

/// Reads a "key = value" file with [subcommand] sections and checks every
/// key against the options of the matching subcommand. Returns the entries;
/// throws CLI::ConfigError naming the file line on an unknown section or key.
std::vector<ConfigEntry> check_config(const std::string& path, const CLI::App& app);

/// "config line N" for the first entry whose key appears in message, or "".
std::string locate_in_config(const std::vector<ConfigEntry>& entries, const std::string& message);

}  // namespace gibbsk::cli
