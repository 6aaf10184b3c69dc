#include "config_check.hpp"

#include <fstream>

#include <boost/algorithm/string/trim.hpp>

namespace gibbsk::cli {

namespace {

const CLI::Option* find_option(const CLI::App& app, const std::string& key) {
  for (const CLI::Option* opt : app.get_options())
    for (const std::string& name : opt->get_lnames())
      if (name == key) return opt;
  return nullptr;
}

}  // namespace

std::vector<ConfigEntry> check_config(const std::string& path, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw CLI::ConfigError("cannot open config file '" + path + "'");
  std::vector<ConfigEntry> out;
  std::string section;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    std::string s = raw.substr(0, raw.find_first_of("#;"));
    boost::algorithm::trim(s);
    if (s.empty()) continue;
    const std::string where = path + ":" + std::to_string(line) + ": ";
    if (s.front() == '[') {
      if (s.back() != ']') throw CLI::ConfigError(where + "unterminated section header");
      section = boost::algorithm::trim_copy(s.substr(1, s.size() - 2));
      if (section == "default") section.clear();
      if (!section.empty() && !app.get_subcommand_no_throw(section))
        throw CLI::ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw CLI::ConfigError(where + "expected 'key = value'");
    const std::string key = boost::algorithm::trim_copy(s.substr(0, eq));
    const CLI::App* owner = section.empty() ? &app : app.get_subcommand_no_throw(section);
    if (key.empty() || !find_option(*owner, key) || key == "config")
      throw CLI::ConfigError(where + "unknown key '" + key + "'" +
                             (section.empty() ? std::string() : " in section [" + section + "]"));
    if (boost::algorithm::trim_copy(s.substr(eq + 1)).empty())
      throw CLI::ConfigError(where + "empty value for '" + key + "'");
    out.push_back({section, key, line});
  }
  return out;
}

std::string locate_in_config(const std::vector<ConfigEntry>& entries, const std::string& message) {
  for (const ConfigEntry& e : entries)
    if (message.find("--" + e.key) != std::string::npos || message.find(e.key + ":") != std::string::npos)
      return "config line " + std::to_string(e.line);
  return "";
}

}  // namespace gibbsk::cli
