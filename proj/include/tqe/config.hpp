#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tqe {

enum class ParamType { Int, Real, Bool, String, IntList, RealList };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::String;
  bool required = false;
  std::string default_value;  // empty string = no default
};

/// Flat `key = value` experiment configuration with typed validation.
/// Lines starting with '#' and blank lines are ignored. Unknown keys,
/// duplicate keys, missing required keys and unparsable values raise
/// ValidationError naming the key.
class Config {
 public:
  static Config parse_file(const std::string& path, const std::vector<ParamSpec>& schema);
  static Config parse_text(const std::string& text, const std::vector<ParamSpec>& schema);

  bool has(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;
  std::vector<double> get_real_list(const std::string& key) const;

  /// Resolved key/value pairs (defaults included), for run manifests.
  const std::map<std::string, std::string>& resolved() const { return values_; }

  /// Override a value after parsing (used for CLI flag overrides); the value
  /// must still satisfy the schema.
  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, ParamType> types_;
};

}  // namespace tqe
