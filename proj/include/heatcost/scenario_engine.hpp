#pragma once

#include "heatcost/config.hpp"
#include "heatcost/cost_model.hpp"
#include "heatcost/price_store.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace heatcost {

/// Multiplier that scales German households to all European households. It
/// is the ratio of the Europe-wide daily estimate (70 Mio. EUR) to the German
/// one (14.1 Mio. EUR); no household counts for Europe are available.
inline const Decimal kEuropeMultiplier{5};

/// Heating days left from the March 4 dateline to the end of March.
inline constexpr std::int64_t kDefaultDaysRemaining = 27;

/// The national population as a scenario subject.
struct NationalTarget {
  HousingStock stock;
  Decimal temp_reduction_c = kReferenceReductionC;
  KwhRounding rounding = KwhRounding::rounded;
};

/// A price looked up in a series with step-function semantics.
struct SeriesPrice {
  std::shared_ptr<const PriceSeries> series;
  Date as_of;
  bool stale = false;
};

using PriceSource = std::variant<Decimal, SeriesPrice>;

struct Scenario {
  std::string label;
  std::variant<HouseholdProfile, NationalTarget> subject;
  PriceSource price = kDefaultPriceEurMwh;
  Decimal europe_multiplier{1};
  std::int64_t days_remaining = kDefaultDaysRemaining;

  bool is_national() const { return std::holds_alternative<NationalTarget>(subject); }

  void check() const {
    if (europe_multiplier.sign() <= 0) throw InvalidArgument("europe_multiplier", "must be > 0");
    if (days_remaining < 0) throw InvalidArgument("days_remaining", "must be >= 0");
    if (const auto* fixed = std::get_if<Decimal>(&price); fixed && fixed->sign() < 0)
      throw InvalidArgument("price_eur_mwh", "must be >= 0");
  }
};

struct ScenarioResult {
  std::string label;
  std::variant<CostBreakdown, NationalEstimate> daily;
  Decimal price_eur_mwh;
  // Daily totals for the whole population: `daily` times europe_multiplier.
  // Savings include cold showers.
  Decimal daily_payment_eur;
  Decimal daily_savings_eur;
  Decimal cumulative_savings_eur;
  Decimal europe_multiplier;
  std::int64_t days_remaining = 0;
  bool staleness_flag = false;
  bool extrapolated = false;
  std::vector<std::string> notes;

  bool is_national() const { return std::holds_alternative<NationalEstimate>(daily); }
};

inline Decimal resolve_price(const PriceSource& source, bool* stale = nullptr) {
  if (const auto* fixed = std::get_if<Decimal>(&source)) {
    if (stale) *stale = false;
    return *fixed;
  }
  const auto& ref = std::get<SeriesPrice>(source);
  if (!ref.series || ref.series->empty()) throw NoDataError("no price series loaded");
  if (stale) *stale = ref.stale;
  return latest_price(*ref.series, ref.as_of);
}

inline ScenarioResult evaluate(const Scenario& scenario, const ModelParams& params) {
  scenario.check();
  params.check();
  ScenarioResult r;
  r.label = scenario.label;
  r.price_eur_mwh = resolve_price(scenario.price, &r.staleness_flag);
  r.europe_multiplier = scenario.europe_multiplier;
  r.days_remaining = scenario.days_remaining;

  Decimal reduction;
  if (const auto* profile = std::get_if<HouseholdProfile>(&scenario.subject)) {
    const auto b = household_breakdown(*profile, r.price_eur_mwh, params);
    r.daily_payment_eur = b.payment_eur_per_day * scenario.europe_multiplier;
    r.daily_savings_eur = (b.savings_eur_per_day + b.shower_savings_eur_per_day) * scenario.europe_multiplier;
    r.daily = b;
    reduction = profile->temp_reduction_c;
  } else {
    const auto& target = std::get<NationalTarget>(scenario.subject);
    if (target.temp_reduction_c.sign() < 0) throw InvalidArgument("temp_reduction_c", "must be >= 0");
    const auto e = national_estimate(target.stock, r.price_eur_mwh, params, target.rounding, target.temp_reduction_c);
    r.daily_payment_eur = e.total_payment_eur_per_day * scenario.europe_multiplier;
    r.daily_savings_eur = e.total_savings_eur_per_day * scenario.europe_multiplier;
    r.daily = e;
    reduction = target.temp_reduction_c;
  }
  r.cumulative_savings_eur = r.daily_savings_eur * Decimal(scenario.days_remaining);

  r.extrapolated = is_extrapolated(reduction);
  if (r.extrapolated)
    r.notes.push_back("savings for a " + reduction.to_string(0) +
                      " degC reduction are extrapolated linearly from the 2 degC savings rate");
  if (scenario.europe_multiplier != Decimal(1))
    r.notes.push_back("europe_multiplier " + scenario.europe_multiplier.to_string(0) +
                      " scales German households to Europe (implied by 70 Mio. vs 14.1 Mio. EUR per day); "
                      "the published Europe-wide cumulative figure of 1.8 bn EUR is not exactly recoverable, "
                      "the computed value is reported instead");
  if (r.staleness_flag) r.notes.push_back("price taken from a stale cache entry");
  return r;
}

struct ComparisonRow {
  std::string label;
  Decimal daily_payment_eur;
  Decimal daily_savings_eur;
  Decimal net_payment_eur;  // payment minus savings
  Decimal cumulative_savings_eur;
  // Row minus baseline; empty when the row and the baseline differ in kind
  // (household vs national).
  std::optional<Decimal> delta_net_payment_eur;
  std::optional<Decimal> delta_savings_eur;
};

/// Baseline first, then alternatives in input order.
inline std::vector<ComparisonRow> compare(const Scenario& baseline, const std::vector<Scenario>& alternatives,
                                          const ModelParams& params) {
  auto to_row = [](const ScenarioResult& r) {
    ComparisonRow row;
    row.label = r.label;
    row.daily_payment_eur = r.daily_payment_eur;
    row.daily_savings_eur = r.daily_savings_eur;
    row.net_payment_eur = r.daily_payment_eur - r.daily_savings_eur;
    row.cumulative_savings_eur = r.cumulative_savings_eur;
    return row;
  };
  std::vector<ComparisonRow> rows;
  rows.push_back(to_row(evaluate(baseline, params)));
  for (const auto& alt : alternatives) rows.push_back(to_row(evaluate(alt, params)));
  const auto base = rows.front();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool same_kind = (i == 0 ? baseline : alternatives[i - 1]).is_national() == baseline.is_national();
    if (!same_kind) continue;
    rows[i].delta_net_payment_eur = rows[i].net_payment_eur - base.net_payment_eur;
    rows[i].delta_savings_eur = rows[i].daily_savings_eur - base.daily_savings_eur;
  }
  return rows;
}

/// Builds a scenario from one config section.
///
/// Recognized keys: label, kind (household|national), area_m2,
/// temp_reduction_c, cold_showers, persons, n_apartments, avg_area_m2,
/// gas_heating_share, rounding, price_eur_mwh, price_as_of, europe_multiplier,
/// days_remaining, baseline. Without price_eur_mwh or price_as_of the
/// scenario uses `current_price`.
inline Scenario scenario_from_section(const std::string& name, const ConfigSection& section,
                                      const HousingStock& default_stock, const PriceSource& current_price,
                                      std::shared_ptr<const PriceSeries> series = nullptr, bool series_stale = false) {
  static const std::vector<std::string> known = {
      "label",          "kind",           "area_m2",         "temp_reduction_c", "cold_showers",
      "persons",        "n_apartments",   "avg_area_m2",     "gas_heating_share", "rounding",
      "price_eur_mwh",  "price_as_of",    "europe_multiplier", "days_remaining", "baseline"};
  for (const auto& [key, value] : section) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("scenario [" + name + "]: unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = section.find(key);
    if (it == section.end()) return std::nullopt;
    return it->second;
  };

  Scenario s;
  s.label = get("label").value_or(name);
  const std::string kind = get("kind").value_or(get("area_m2") ? "household" : "national");
  if (kind == "household") {
    HouseholdProfile p;
    if (auto v = get("area_m2")) p.area_m2 = parse_decimal_field("area_m2", *v);
    else throw InvalidArgument("area_m2", "required for household scenario [" + name + "]");
    if (auto v = get("temp_reduction_c")) p.temp_reduction_c = parse_decimal_field("temp_reduction_c", *v);
    if (auto v = get("cold_showers")) p.cold_showers = parse_bool_field("cold_showers", *v);
    if (auto v = get("persons")) p.persons = parse_count_field("persons", *v);
    p.check();
    s.subject = p;
  } else if (kind == "national") {
    NationalTarget t;
    t.stock = housing_stock_from(section, default_stock);
    if (auto v = get("temp_reduction_c")) t.temp_reduction_c = parse_decimal_field("temp_reduction_c", *v);
    if (auto v = get("rounding")) t.rounding = parse_kwh_rounding(*v);
    s.subject = t;
  } else {
    throw InvalidArgument("kind", "expected household or national, got '" + kind + "'");
  }

  if (auto v = get("price_eur_mwh")) {
    s.price = parse_decimal_field("price_eur_mwh", *v);
  } else if (auto v = get("price_as_of")) {
    Date as_of;
    try {
      as_of = Date::parse(*v);
    } catch (const std::invalid_argument& e) {
      throw InvalidArgument("price_as_of", e.what());
    }
    s.price = SeriesPrice{std::move(series), as_of, series_stale};
  } else {
    s.price = current_price;
  }
  if (auto v = get("europe_multiplier")) s.europe_multiplier = parse_decimal_field("europe_multiplier", *v);
  if (auto v = get("days_remaining")) s.days_remaining = parse_count_field("days_remaining", *v);
  s.check();
  return s;
}

/// All named sections of a scenario file. The section with `baseline = true`
/// (or else the first one) is returned first.
inline std::vector<Scenario> load_scenarios(const ConfigFile& file, const HousingStock& default_stock,
                                            const PriceSource& current_price,
                                            std::shared_ptr<const PriceSeries> series = nullptr,
                                            bool series_stale = false) {
  std::vector<Scenario> out;
  std::optional<std::size_t> baseline;
  for (const auto& name : file.section_names()) {
    const auto& section = *file.section(name);
    auto it = section.find("baseline");
    if (it != section.end() && parse_bool_field("baseline", it->second)) {
      if (baseline) throw ConfigError("more than one scenario marked baseline");
      baseline = out.size();
    }
    out.push_back(scenario_from_section(name, section, default_stock, current_price, series, series_stale));
  }
  if (out.empty()) throw ConfigError("scenario file defines no [sections]");
  if (baseline && *baseline != 0) std::rotate(out.begin(), out.begin() + static_cast<long>(*baseline),
                                              out.begin() + static_cast<long>(*baseline) + 1);
  return out;
}

}  // namespace heatcost
