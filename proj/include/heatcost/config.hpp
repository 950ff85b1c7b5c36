#pragma once

// Flat key/value configuration with optional named sections:
//
//   # comment
//   russian_share = 0.5
//   [scenario national_2c]
//   kind = national
//
// Keys before the first section header belong to the unnamed section "".

#include "heatcost/cost_model.hpp"
#include "heatcost/error.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace heatcost {

using ConfigSection = std::map<std::string, std::string>;

class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text) {
    ConfigFile cfg;
    cfg.sections_[""];
    std::string current;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string line(trim(text.substr(pos, eol - pos)));
      pos = eol + 1;
      ++line_no;
      if (line.empty() || line[0] == '#' || line[0] == ';') continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
        current = std::string(trim(std::string_view(line).substr(1, line.size() - 2)));
        if (current.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
        if (cfg.sections_.count(current))
          throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + current + "]");
        cfg.sections_[current];
        cfg.order_.push_back(current);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
      std::string key(trim(std::string_view(line).substr(0, eq)));
      std::string value(trim(std::string_view(line).substr(eq + 1)));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      cfg.sections_[current][key] = value;
    }
    return cfg;
  }

  static ConfigFile load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  const ConfigSection& global() const { return sections_.at(""); }

  const ConfigSection* section(const std::string& name) const {
    auto it = sections_.find(name);
    return it == sections_.end() ? nullptr : &it->second;
  }

  /// Named sections in file order.
  const std::vector<std::string>& section_names() const noexcept { return order_; }

 private:
  static std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  }

  std::map<std::string, ConfigSection> sections_;
  std::vector<std::string> order_;
};

inline Decimal parse_decimal_field(const std::string& field, const std::string& text) {
  try {
    return Decimal::parse(text);
  } catch (const std::invalid_argument&) {
    throw InvalidArgument(field, "expected a decimal number, got '" + text + "'");
  }
}

inline std::int64_t parse_count_field(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidArgument(field, "expected an integer, got '" + text + "'");
  return v;
}

inline bool parse_bool_field(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InvalidArgument(field, "expected true/false, got '" + text + "'");
}

inline const std::vector<std::string>& model_param_keys() {
  static const std::vector<std::string> keys = {
      "intensity_kwh_per_m2_year",    "heating_days_per_year",       "russian_share",
      "savings_rate_per_2c",          "shower_annual_kwh_per_person", "shower_water_liters_per_day",
      "days_per_year_for_showers"};
  return keys;
}

inline const std::vector<std::string>& housing_stock_keys() {
  static const std::vector<std::string> keys = {"n_apartments", "avg_area_m2", "gas_heating_share"};
  return keys;
}

inline Decimal* model_param_field(ModelParams& p, const std::string& key) {
  if (key == "intensity_kwh_per_m2_year") return &p.intensity_kwh_per_m2_year;
  if (key == "heating_days_per_year") return &p.heating_days_per_year;
  if (key == "russian_share") return &p.russian_share;
  if (key == "savings_rate_per_2c") return &p.savings_rate_per_2c;
  if (key == "shower_annual_kwh_per_person") return &p.shower_annual_kwh_per_person;
  if (key == "shower_water_liters_per_day") return &p.shower_water_liters_per_day;
  if (key == "days_per_year_for_showers") return &p.days_per_year_for_showers;
  return nullptr;
}

inline Decimal* housing_stock_field(HousingStock& s, const std::string& key) {
  if (key == "n_apartments") return &s.n_apartments;
  if (key == "avg_area_m2") return &s.avg_area_m2;
  if (key == "gas_heating_share") return &s.gas_heating_share;
  return nullptr;
}

/// Applies the model keys present in `values` on top of `base` and validates.
inline ModelParams model_params_from(const ConfigSection& values, ModelParams base = {}) {
  for (const auto& [key, text] : values) {
    if (auto* field = model_param_field(base, key)) *field = parse_decimal_field(key, text);
  }
  base.check();
  return base;
}

inline HousingStock housing_stock_from(const ConfigSection& values, HousingStock base = {}) {
  for (const auto& [key, text] : values) {
    if (auto* field = housing_stock_field(base, key)) *field = parse_decimal_field(key, text);
  }
  base.check();
  return base;
}

}  // namespace heatcost
