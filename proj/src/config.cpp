#include "tqe/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tqe/error.hpp"

namespace tqe {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  std::int64_t out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (...) {
    throw ValidationError("config key '" + key + "': expected integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ValidationError("config key '" + key + "': trailing characters in integer '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (...) {
    throw ValidationError("config key '" + key + "': expected real, got '" + v + "'");
  }
  if (pos != v.size())
    throw ValidationError("config key '" + key + "': trailing characters in real '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config key '" + key + "': expected boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

void check_value(const std::string& key, ParamType type, const std::string& value) {
  switch (type) {
    case ParamType::Int: parse_int(key, value); break;
    case ParamType::Real: parse_real(key, value); break;
    case ParamType::Bool: parse_bool(key, value); break;
    case ParamType::String: break;
    case ParamType::IntList:
      for (const auto& p : split_list(value)) parse_int(key, p);
      break;
    case ParamType::RealList:
      for (const auto& p : split_list(value)) parse_real(key, p);
      break;
  }
}

}  // namespace

Config Config::parse_text(const std::string& text, const std::vector<ParamSpec>& schema) {
  std::map<std::string, const ParamSpec*> by_key;
  for (const auto& spec : schema) by_key[spec.key] = &spec;

  Config cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected 'key = value', got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    auto it = by_key.find(key);
    if (it == by_key.end())
      throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                            "'");
    if (cfg.values_.count(key))
      throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                            "'");
    check_value(key, it->second->type, value);
    cfg.values_[key] = value;
    cfg.types_[key] = it->second->type;
  }
  for (const auto& spec : schema) {
    if (cfg.values_.count(spec.key)) continue;
    if (spec.required) throw ValidationError("config: missing required key '" + spec.key + "'");
    if (!spec.default_value.empty()) {
      check_value(spec.key, spec.type, spec.default_value);
      cfg.values_[spec.key] = spec.default_value;
      cfg.types_[spec.key] = spec.type;
    } else {
      cfg.types_[spec.key] = spec.type;  // known but absent
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path, const std::vector<ParamSpec>& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_text(text, schema);
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::int64_t Config::get_int(const std::string& key) const {
  return parse_int(key, get_string(key));
}

double Config::get_real(const std::string& key) const { return parse_real(key, get_string(key)); }

bool Config::get_bool(const std::string& key) const { return parse_bool(key, get_string(key)); }

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("config: key '" + key + "' is not set");
  return it->second;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& p : split_list(get_string(key))) out.push_back(parse_int(key, p));
  return out;
}

std::vector<double> Config::get_real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& p : split_list(get_string(key))) out.push_back(parse_real(key, p));
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = types_.find(key);
  if (it == types_.end()) throw ValidationError("config: unknown key '" + key + "'");
  check_value(key, it->second, value);
  values_[key] = value;
}

}  // namespace tqe
