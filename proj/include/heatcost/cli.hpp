#pragma once

// `heatcost` command line.
//
// Settings resolve as flag > environment (HEATCOST_<KEY>) > config file >
// built-in default, and each resolved value remembers where it came from.

#include "heatcost/api_service.hpp"
#include "heatcost/config.hpp"
#include "heatcost/cost_model.hpp"
#include "heatcost/fetcher.hpp"
#include "heatcost/price_store.hpp"
#include "heatcost/report.hpp"
#include "heatcost/scenario_engine.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace heatcost {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> system_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

enum class SettingOrigin { default_value, config_file, environment, flag };

inline std::string to_string(SettingOrigin o) {
  switch (o) {
    case SettingOrigin::default_value: return "default";
    case SettingOrigin::config_file: return "config file";
    case SettingOrigin::environment: return "environment";
    case SettingOrigin::flag: return "flag";
  }
  return "unknown";
}

struct Setting {
  std::string value;
  SettingOrigin origin = SettingOrigin::default_value;
};

inline std::string env_name(const std::string& key) {
  std::string name = "HEATCOST_";
  for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

class CliConfig {
 public:
  /// Every recognized key with its built-in default, in display order.
  static const std::vector<std::pair<std::string, std::string>>& defaults() {
    static const std::vector<std::pair<std::string, std::string>> d = {
        {"intensity_kwh_per_m2_year", "140"},
        {"heating_days_per_year", "180"},
        {"russian_share", "0.5"},
        {"savings_rate_per_2c", "0.12"},
        {"shower_annual_kwh_per_person", "550"},
        {"shower_water_liters_per_day", "40"},
        {"days_per_year_for_showers", "365"},
        {"n_apartments", "42500000"},
        {"avg_area_m2", "92"},
        {"gas_heating_share", "0.48"},
        {"feed_kind", "fixture"},
        {"feed_location", "fixtures/the_spot_2022.csv"},
        {"feed_format", "csv"},
        {"feed_cache_ttl", "3600"},
        {"cache_dir", ".heatcost/cache"},
        {"store_path", ".heatcost/prices.csv"},
        {"bind_address", "127.0.0.1:8080"},
        {"split_date", "2022-02-24"},
        {"cors_origin", "*"},
    };
    return d;
  }

  static CliConfig resolve(const std::optional<std::filesystem::path>& config_path, const EnvLookup& env,
                           const std::map<std::string, std::string>& flags) {
    CliConfig cfg;
    for (const auto& [key, value] : defaults()) cfg.settings_[key] = {value, SettingOrigin::default_value};

    if (config_path) {
      const auto file = ConfigFile::load(*config_path);
      for (const auto& [key, value] : file.global()) cfg.set(key, value, SettingOrigin::config_file);
    }
    for (const auto& [key, unused] : defaults()) {
      if (auto v = env(env_name(key))) cfg.settings_[key] = {*v, SettingOrigin::environment};
    }
    for (const auto& [key, value] : flags) cfg.set(key, value, SettingOrigin::flag);
    return cfg;
  }

  const Setting& setting(const std::string& key) const {
    auto it = settings_.find(key);
    if (it == settings_.end()) throw ConfigError("unknown setting '" + key + "'");
    return it->second;
  }
  const std::string& get(const std::string& key) const { return setting(key).value; }

  ModelParams model_params() const {
    ConfigSection values;
    for (const auto& key : model_param_keys()) values[key] = get(key);
    return model_params_from(values);
  }

  HousingStock housing_stock() const {
    ConfigSection values;
    for (const auto& key : housing_stock_keys()) values[key] = get(key);
    return housing_stock_from(values);
  }

  FeedSource feed_source() const {
    FeedSource s;
    s.kind = parse_source_kind(get("feed_kind"));
    s.location = get("feed_location");
    s.format = parse_feed_format(get("feed_format"));
    s.cache_ttl = std::chrono::seconds{parse_count_field("feed_cache_ttl", get("feed_cache_ttl"))};
    s.check();
    return s;
  }

  Date split_date() const {
    try {
      return Date::parse(get("split_date"));
    } catch (const std::invalid_argument& e) {
      throw InvalidArgument("split_date", e.what());
    }
  }

  std::pair<std::string, int> bind_address() const {
    const auto& addr = get("bind_address");
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon == 0) throw InvalidArgument("bind_address", "expected host:port");
    const auto port = parse_count_field("bind_address", addr.substr(colon + 1));
    if (port < 0 || port > 65535) throw InvalidArgument("bind_address", "port out of range");
    return {addr.substr(0, colon), static_cast<int>(port)};
  }

 private:
  void set(const std::string& key, const std::string& value, SettingOrigin origin) {
    auto it = settings_.find(key);
    if (it == settings_.end()) throw ConfigError("unknown setting '" + key + "'");
    it->second = {value, origin};
  }

  std::map<std::string, Setting> settings_;
};

/// Process-level collaborators, replaceable in tests.
struct CliContext {
  EnvLookup env = system_env;
  std::shared_ptr<Transport> transport = std::make_shared<HttpTransport>();
  std::function<std::chrono::system_clock::time_point()> clock = [] { return std::chrono::system_clock::now(); };
};

namespace detail {

inline std::shared_ptr<PriceStore> open_store(const CliConfig& cfg) {
  auto store = std::make_shared<PriceStore>(cfg.get("store_path"));
  store->load();
  return store;
}

inline std::optional<Decimal> optional_decimal(const std::string& field, const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_decimal_field(field, text);
}

inline std::optional<Date> optional_date(const std::string& field, const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    return Date::parse(text);
  } catch (const std::invalid_argument& e) {
    throw InvalidArgument(field, e.what());
  }
}

}  // namespace detail

/// Runs one command. `args` excludes the program name. Returns the exit code;
/// anything written to `err` implies a nonzero code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err, const CliContext& ctx = {}) {
  CLI::App app{"Gas spot prices, household heating payments and savings scenarios", "heatcost"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Config file (default: $HEATCOST_CONFIG)");
  app.add_option("--set", overrides, "Override a setting, key=value (repeatable)");

  std::map<std::string, std::string> flags;
  bool json = false;
  auto flag_option = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", json, "Emit JSON");
    flag_option(sub, "--store", "store_path", "Price store file");
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Fetch a feed and merge it into the price store");
  std::string ingest_positional;
  common(ingest);
  ingest->add_option("source", ingest_positional, "Feed file (shorthand for --kind file --location PATH)");
  flag_option(ingest, "--kind", "feed_kind", "http, file or fixture");
  flag_option(ingest, "--location", "feed_location", "URL or path");
  flag_option(ingest, "--format", "feed_format", "csv or json");
  flag_option(ingest, "--cache-ttl", "feed_cache_ttl", "Cache ttl in seconds");
  flag_option(ingest, "--cache-dir", "cache_dir", "Cache directory");

  // stats
  auto* stats = app.add_subcommand("stats", "Pre-war mean, latest price and ratio");
  common(stats);
  flag_option(stats, "--split-date", "split_date", "First war-time date");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Daily payment and savings of one household");
  common(estimate);
  std::string area, temp_reduction, price_text, as_of_text;
  std::int64_t persons = 1;
  bool cold_showers = false;
  estimate->add_option("--area", area, "Floor area in m²")->required();
  estimate->add_option("--temp-reduction", temp_reduction, "Room temperature reduction in °C");
  estimate->add_flag("--cold-showers", cold_showers, "Take cold showers");
  estimate->add_option("--persons", persons, "Persons in the household");
  estimate->add_option("--price", price_text, "Spot price in EUR/MWh (default: latest stored quote)");

  // national
  auto* national = app.add_subcommand("national", "National daily payments (all gas-heated households)");
  common(national);
  std::string rounding_mode = "rounded";
  std::string national_reduction = "2";
  national->add_option("--price", price_text, "Spot price in EUR/MWh");
  national->add_option("--rounding-mode", rounding_mode, "rounded or unrounded per-household kWh");
  national->add_option("--temp-reduction", national_reduction, "Temperature reduction for the savings row");
  flag_option(national, "--gas-share", "gas_heating_share", "Share of apartments with gas heating");
  flag_option(national, "--apartments", "n_apartments", "Number of apartments");
  flag_option(national, "--avg-area", "avg_area_m2", "Average apartment size in m²");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Evaluate and compare what-if scenarios");
  common(scenario);
  std::string scenario_file, label, europe_multiplier, days_remaining, output_format = "table";
  bool national_subject = false;
  scenario->add_option("--file", scenario_file, "Scenario file, one [section] per scenario");
  scenario->add_option("--label", label, "Label of the inline scenario");
  scenario->add_option("--area", area, "Household floor area in m²");
  scenario->add_flag("--national", national_subject, "Evaluate all gas-heated households");
  scenario->add_option("--temp-reduction", temp_reduction, "Room temperature reduction in °C");
  scenario->add_flag("--cold-showers", cold_showers, "Take cold showers");
  scenario->add_option("--persons", persons, "Persons in the household");
  scenario->add_option("--price", price_text, "Spot price in EUR/MWh");
  scenario->add_option("--as-of", as_of_text, "Use the stored price as of this date");
  scenario->add_option("--europe-multiplier", europe_multiplier, "Population multiplier (5 = all of Europe)");
  scenario->add_option("--days-remaining", days_remaining, "Heating days left");
  scenario->add_option("--rounding-mode", rounding_mode, "National per-household kWh rounding");
  scenario->add_option("--format", output_format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  // export-figure
  auto* figure = app.add_subcommand("export-figure", "Plot-ready series: date, price, rolling mean");
  common(figure);
  std::string from_text, to_text, figure_format = "csv", output_path;
  int window = 7;
  figure->add_option("--from", from_text, "First date");
  figure->add_option("--to", to_text, "Last date");
  figure->add_option("--format", figure_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  figure->add_option("--window", window, "Rolling mean window in calendar days");
  figure->add_option("--output,-o", output_path, "Output file (default: stdout)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the JSON API");
  common(serve);
  flag_option(serve, "--bind", "bind_address", "host:port");
  flag_option(serve, "--split-date", "split_date", "First war-time date");
  flag_option(serve, "--cors-origin", "cors_origin", "Access-Control-Allow-Origin value, empty to disable");

  // show-config
  auto* show = app.add_subcommand("show-config", "Print resolved settings and where they came from");
  common(show);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      flags.emplace(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (ingest->parsed() && !ingest_positional.empty()) {
      flags.try_emplace("feed_kind", "file");
      flags["feed_location"] = ingest_positional;
    }
    std::optional<std::filesystem::path> cfg_path;
    if (!config_path.empty())
      cfg_path = config_path;
    else if (auto v = ctx.env("HEATCOST_CONFIG"))
      cfg_path = *v;
    const auto cfg = CliConfig::resolve(cfg_path, ctx.env, flags);

    if (ingest->parsed()) {
      const auto source = cfg.feed_source();
      Fetcher fetcher(cfg.get("cache_dir"), ctx.transport);
      const auto fetched = fetcher.fetch(source, ctx.clock());
      auto series = validate_series(parse_price_feed(fetched.body, source.format));
      series.source_label = source.location;
      auto store = detail::open_store(cfg);
      store->ingest(series, Provenance{fetched.origin, fetched.fetched_at, fetched.stale});
      const auto range = series.front().date.to_string() + ".." + series.back().date.to_string();
      if (json) {
        Json j;
        j["ingested"] = series.size();
        j["from"] = series.front().date.to_string();
        j["to"] = series.back().date.to_string();
        j["origin"] = fetched.origin;
        j["stale"] = fetched.stale;
        j["store"] = cfg.get("store_path");
        j["store_quotes"] = store->snapshot()->series.size();
        out << j.dump() << '\n';
      } else {
        out << "ingested " << series.size() << " quotes (" << range << ")\n";
        if (fetched.stale) out << "note: upstream unreachable, served a stale cache entry\n";
      }
      return 0;
    }

    if (stats->parsed()) {
      const auto store = detail::open_store(cfg);
      const auto snap = store->snapshot();
      if (!snap || snap->series.empty()) throw NoDataError("price store is empty; run `heatcost ingest` first");
      const auto& s = snap->series;
      const auto st = price_stats(s, cfg.split_date());
      if (json) {
        Json j;
        j["count"] = s.size();
        j["from"] = s.front().date.to_string();
        j["to"] = s.back().date.to_string();
        j["stats"] = stats_json(st);
        out << j.dump() << '\n';
      } else {
        out << "quotes         " << s.size() << " (" << s.front().date.to_string() << ".." << s.back().date.to_string()
            << ")\n";
        out << "pre-war mean   " << display::price(st.pre_mean) << " (before " << st.split_date.to_string() << ")\n";
        out << "latest         " << display::price(st.post_latest) << " (" << s.back().date.to_string() << ")\n";
        out << "ratio          ×" << quantize(st.ratio).to_fixed(2) << '\n';
      }
      return 0;
    }

    if (estimate->parsed()) {
      HouseholdProfile p;
      p.area_m2 = parse_decimal_field("area_m2", area);
      if (!temp_reduction.empty()) p.temp_reduction_c = parse_decimal_field("temp_reduction_c", temp_reduction);
      p.cold_showers = cold_showers;
      p.persons = persons;
      p.check();
      const auto override_price = detail::optional_decimal("price", price_text);
      const auto store = override_price ? nullptr : detail::open_store(cfg);
      const auto price = resolve_current_price(store ? store->snapshot() : nullptr, override_price);
      const auto b = household_breakdown(p, price.value, cfg.model_params());
      if (json) {
        out << breakdown_json(p, price, b).dump() << '\n';
      } else {
        out << breakdown_line(p, b) << '\n';
        if (is_extrapolated(p.temp_reduction_c))
          out << "note: savings for " << p.temp_reduction_c.to_string(0)
              << " °C are extrapolated linearly from the 2 °C savings rate\n";
        if (price.source == "default") out << "note: no stored quotes, using the default price\n";
        if (price.stale) out << "note: price taken from a stale cache entry\n";
      }
      return 0;
    }

    if (national->parsed()) {
      const auto override_price = detail::optional_decimal("price", price_text);
      const auto store = override_price ? nullptr : detail::open_store(cfg);
      const auto price = resolve_current_price(store ? store->snapshot() : nullptr, override_price);
      const auto stock = cfg.housing_stock();
      const auto params = cfg.model_params();
      const auto reduction = parse_decimal_field("temp_reduction_c", national_reduction);
      const auto e = national_estimate(stock, price.value, params, parse_kwh_rounding(rounding_mode), reduction);
      if (json)
        out << national_json(stock, price.value, e, reduction).dump() << '\n';
      else
        out << national_table(stock, params, price.value, e, reduction);
      return 0;
    }

    if (scenario->parsed()) {
      if (json) output_format = "json";
      const auto store = detail::open_store(cfg);
      const auto snap = store->snapshot();
      std::shared_ptr<const PriceSeries> series;
      if (snap) series = std::shared_ptr<const PriceSeries>(snap, &snap->series);
      const bool stale = snap && snap->provenance.stale;
      const auto current = resolve_current_price(snap, std::nullopt);
      const PriceSource current_source = current.source == "store"
                                             ? PriceSource(SeriesPrice{series, snap->series.back().date, stale})
                                             : PriceSource(current.value);
      const auto stock = cfg.housing_stock();

      std::vector<Scenario> scenarios;
      if (!scenario_file.empty()) {
        scenarios = load_scenarios(ConfigFile::load(scenario_file), stock, current_source, series, stale);
      } else {
        if (area.empty() == !national_subject)
          throw InvalidArgument("area_m2", "give either --area or --national (or --file)");
        ConfigSection section;
        section["kind"] = national_subject ? "national" : "household";
        if (!area.empty()) section["area_m2"] = area;
        if (!temp_reduction.empty()) section["temp_reduction_c"] = temp_reduction;
        if (!national_subject) {
          section["cold_showers"] = cold_showers ? "true" : "false";
          section["persons"] = std::to_string(persons);
        } else {
          section["rounding"] = rounding_mode;
        }
        if (!price_text.empty()) section["price_eur_mwh"] = price_text;
        if (!as_of_text.empty()) section["price_as_of"] = as_of_text;
        if (!europe_multiplier.empty()) section["europe_multiplier"] = europe_multiplier;
        if (!days_remaining.empty()) section["days_remaining"] = days_remaining;
        scenarios.push_back(scenario_from_section(label.empty() ? section["kind"] : label, section, stock,
                                                  current_source, series, stale));
      }
      const auto params = cfg.model_params();
      std::vector<ScenarioResult> results;
      for (const auto& s : scenarios) results.push_back(evaluate(s, params));
      const auto rows =
          compare(scenarios.front(), std::vector<Scenario>(scenarios.begin() + 1, scenarios.end()), params);
      if (output_format == "json") {
        Json j;
        j["results"] = Json::array();
        for (std::size_t i = 0; i < results.size(); ++i)
          j["results"].push_back(scenario_result_json(results[i], scenarios[i]));
        j["comparison"] = comparison_json(rows, results);
        out << j.dump() << '\n';
      } else if (output_format == "csv") {
        out << comparison_csv(rows);
      } else {
        out << comparison_table(rows, results);
      }
      return 0;
    }

    if (figure->parsed()) {
      if (json) figure_format = "json";
      const auto store = detail::open_store(cfg);
      const auto snap = store->snapshot();
      if (!snap || snap->series.empty()) throw NoDataError("price store is empty; run `heatcost ingest` first");
      const auto range = slice(snap->series, detail::optional_date("from", from_text), detail::optional_date("to", to_text));
      const auto text = figure_export(range, parse_feed_format(figure_format), window);
      if (output_path.empty()) {
        out << text;
      } else {
        std::ofstream file(output_path, std::ios::binary | std::ios::trunc);
        file << text;
        if (!file) throw Error("cannot write " + output_path);
        out << "wrote " << range.size() << " rows to " << output_path << '\n';
      }
      return 0;
    }

    if (serve->parsed()) {
      const auto store = detail::open_store(cfg);
      ApiConfig api_cfg;
      api_cfg.split_date = cfg.split_date();
      api_cfg.cors_origin = cfg.get("cors_origin");
      ApiService service(store, cfg.model_params(), cfg.housing_stock(), api_cfg);
      const auto [host, port] = cfg.bind_address();
      if (json)
        out << Json{{"listening", host + ":" + std::to_string(port)}}.dump() << std::endl;
      else
        out << "serving http://" << host << ':' << port << "/api/v1" << std::endl;
      if (!service.listen(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
      return 0;
    }

    if (show->parsed()) {
      Json j;
      for (const auto& [key, unused] : CliConfig::defaults()) {
        const auto& s = cfg.setting(key);
        if (json)
          j[key] = {{"value", s.value}, {"origin", to_string(s.origin)}};
        else
          out << key << " = " << s.value << "  (" << to_string(s.origin) << ")\n";
      }
      if (json) out << j.dump() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace heatcost
