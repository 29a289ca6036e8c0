#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>

namespace casimir::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Later keys override earlier ones.
KeyValues parse_keyvalue(std::istream& in, const std::string& source = "<input>");
KeyValues load_keyvalue(const std::filesystem::path& path);

double parse_double(const std::string& text, const std::string& key);
int parse_int(const std::string& text, const std::string& key);
bool parse_bool(const std::string& text, const std::string& key);

}  // namespace casimir::app
