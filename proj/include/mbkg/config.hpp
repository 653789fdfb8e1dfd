#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mbkg {

// TOML subset: [section] headers, key = value, strings, integers, floats, booleans,
// single-line arrays of those, and # comments.
using ConfigScalar = std::variant<bool, long long, double, std::string>;
using ConfigValue = std::variant<bool, long long, double, std::string, std::vector<ConfigScalar>>;

class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, std::filesystem::path base_dir = {});
  static ConfigFile load(const std::filesystem::path& path);  // relative paths resolve against the file's directory

  bool has(const std::string& section, const std::string& key) const;
  std::vector<std::string> keys(const std::string& section) const;
  std::vector<std::string> sections() const;

  // Each getter throws InputError when the key exists with the wrong type.
  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<std::filesystem::path> get_path(const std::string& section, const std::string& key) const;
  std::optional<long long> get_int(const std::string& section, const std::string& key) const;
  std::optional<double> get_double(const std::string& section, const std::string& key) const;  // ints widen
  std::optional<bool> get_bool(const std::string& section, const std::string& key) const;
  std::optional<std::vector<long long>> get_int_list(const std::string& section, const std::string& key) const;
  std::optional<std::vector<double>> get_double_list(const std::string& section, const std::string& key) const;
  std::optional<std::vector<std::string>> get_string_list(const std::string& section, const std::string& key) const;

 private:
  const ConfigValue* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, ConfigValue>> values_;
  std::filesystem::path base_dir_;
};

}  // namespace mbkg
