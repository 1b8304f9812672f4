// SPDX-License-Identifier: Apache-2.0
#include "risee/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <variant>

#include "json.hpp"

namespace risee {

namespace {

using Field = std::variant<int SystemConfig::*, double SystemConfig::*>;

struct KeyInfo {
  const char* name;
  Field field;
};

const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> table = {
      {"M1", &SystemConfig::M1},
      {"M2", &SystemConfig::M2},
      {"N1", &SystemConfig::N1},
      {"N2", &SystemConfig::N2},
      {"K", &SystemConfig::K},
      {"P_static", &SystemConfig::P_static},
      {"P0", &SystemConfig::P0},
      {"Pmax", &SystemConfig::Pmax},
      {"nu", &SystemConfig::nu},
      {"SE_min", &SystemConfig::SE_min},
      {"BW", &SystemConfig::BW},
      {"n0", &SystemConfig::n0},
      {"fc", &SystemConfig::fc},
      {"d_BS", &SystemConfig::d_BS},
      {"d_UE", &SystemConfig::d_UE},
      {"kappa", &SystemConfig::kappa},
      {"pl0_dB", &SystemConfig::pl0_dB},
      {"pl_exp", &SystemConfig::pl_exp},
      {"az_min", &SystemConfig::az_min},
      {"az_max", &SystemConfig::az_max},
      {"el_min", &SystemConfig::el_min},
      {"el_max", &SystemConfig::el_max},
      {"cond_cap", &SystemConfig::cond_cap},
  };
  return table;
}

const KeyInfo& find_key(std::string_view key) {
  for (const auto& k : key_table())
    if (key == k.name) return k;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

void set_from_json(SystemConfig& cfg, const KeyInfo& key, const nlohmann::json& v) {
  if (std::holds_alternative<int SystemConfig::*>(key.field)) {
    if (!v.is_number_integer())
      throw ConfigError("config key '" + std::string(key.name) + "' must be an integer");
    cfg.*std::get<int SystemConfig::*>(key.field) = v.get<int>();
  } else {
    if (!v.is_number())
      throw ConfigError("config key '" + std::string(key.name) + "' must be a number");
    cfg.*std::get<double SystemConfig::*>(key.field) = v.get<double>();
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

SystemConfig parse_config(std::string_view text, const SystemConfig& base) {
  SystemConfig cfg = base;
  if (trim(text).empty()) return cfg;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::ostringstream os;
    os << "config parse error at line " << line_of(text, e.byte == 0 ? 0 : e.byte - 1) << ": " << e.what();
    throw ConfigError(os.str());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) set_from_json(cfg, find_key(it.key()), it.value());
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  SystemConfig cfg = parse_config(text);
  cfg.validate();
  return cfg;
}

void apply_override(SystemConfig& cfg, std::string_view key, std::string_view value) {
  const KeyInfo& info = find_key(trim(key));
  value = trim(value);
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if (std::holds_alternative<int SystemConfig::*>(info.field)) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || value.empty())
      throw ConfigError("override for '" + std::string(info.name) + "' must be an integer, got '" +
                        std::string(value) + "'");
    cfg.*std::get<int SystemConfig::*>(info.field) = v;
  } else {
    double v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || value.empty())
      throw ConfigError("override for '" + std::string(info.name) + "' must be a number, got '" +
                        std::string(value) + "'");
    cfg.*std::get<double SystemConfig::*>(info.field) = v;
  }
}

void apply_override(SystemConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must be KEY=VALUE, got '" + std::string(assignment) + "'");
  apply_override(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& k : key_table()) keys.emplace_back(k.name);
  return keys;
}

std::string config_to_json(const SystemConfig& cfg) {
  nlohmann::ordered_json out;
  for (const auto& k : key_table()) {
    if (std::holds_alternative<int SystemConfig::*>(k.field))
      out[k.name] = cfg.*std::get<int SystemConfig::*>(k.field);
    else
      out[k.name] = cfg.*std::get<double SystemConfig::*>(k.field);
  }
  return out.dump(2);
}

}  // namespace risee
