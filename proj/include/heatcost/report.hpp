#pragma once

// Output boundary: display rounding and the JSON/CSV/text shapes shared by
// the CLI and the HTTP API.
//
// Display rules: kWh as integers, EUR to cents, TWh to 2 decimals, rounding
// half away from zero. National EUR totals are shown in millions ("Mio.")
// truncated toward zero, i.e. "at least this many millions". Raw values
// are quantized to 10 fractional digits and every display string is derived
// from the quantized raw value, so the pair in a response is always consistent.

#include "heatcost/cost_model.hpp"
#include "heatcost/price_store.hpp"
#include "heatcost/scenario_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace heatcost {

using Json = nlohmann::ordered_json;

inline constexpr unsigned kRawDigits = 10;

inline Decimal quantize(const Decimal& v) { return v.rounded(kRawDigits); }

namespace display {

inline std::string kwh(const Decimal& v) { return quantize(v).to_fixed(0) + " kWh"; }
inline std::string kwh1(const Decimal& v) { return quantize(v).to_fixed(1) + " kWh"; }
inline std::string twh(const Decimal& v) { return quantize(v).to_fixed(2) + " TWh"; }
inline std::string eur(const Decimal& v) {
  const auto q = quantize(v);
  return q.sign() < 0 ? "-€" + (-q).to_fixed(2) : "€" + q.to_fixed(2);
}
inline std::string eur_mio(const Decimal& v, unsigned digits = 0) {
  const auto q = quantize(v) / Decimal(1'000'000);
  const auto mode = Decimal::Rounding::toward_zero;
  return q.sign() < 0 ? "-€" + (-q).to_fixed(digits, mode) + " Mio." : "€" + q.to_fixed(digits, mode) + " Mio.";
}
inline std::string count_mio(const Decimal& v) { return (quantize(v) / Decimal(1'000'000)).to_fixed(1) + " Mio."; }
inline std::string percent(const Decimal& fraction) { return (fraction * Decimal(100)).to_string(0) + " %"; }
inline std::string price(const Decimal& v) { return quantize(v).to_fixed(2) + " EUR/MWh"; }

}  // namespace display

inline std::string raw(const Decimal& v) { return quantize(v).to_fixed(kRawDigits); }

/// {"raw": "<10-digit decimal>", "display": "<rounded>"}
template <typename Fmt>
Json value_json(const Decimal& v, Fmt fmt) {
  Json j;
  j["raw"] = raw(v);
  j["display"] = fmt(v);
  return j;
}

/// Where the price of an estimate came from.
struct ResolvedPrice {
  Decimal value;
  std::string source;  // "override", "store" or "default"
  bool stale = false;
};

/// Override if given, else the latest stored quote, else the built-in default.
inline ResolvedPrice resolve_current_price(const std::shared_ptr<const Snapshot>& snapshot,
                                           const std::optional<Decimal>& override_price) {
  if (override_price) {
    if (override_price->sign() < 0) throw InvalidArgument("price", "must be >= 0");
    return {*override_price, "override", false};
  }
  if (snapshot && !snapshot->series.empty())
    return {snapshot->series.back().price, "store", snapshot->provenance.stale};
  return {kDefaultPriceEurMwh, "default", false};
}

inline Json breakdown_json(const HouseholdProfile& profile, const ResolvedPrice& price, const CostBreakdown& b) {
  Json j;
  j["inputs"] = {{"area_m2", profile.area_m2.to_string(0)},
                 {"temp_reduction_c", profile.temp_reduction_c.to_string(0)},
                 {"cold_showers", profile.cold_showers},
                 {"persons", profile.persons}};
  j["price_eur_mwh"] = value_json(price.value, display::price);
  j["price_source"] = price.source;
  j["consumption_kwh_per_day"] = value_json(b.consumption_kwh_per_day, display::kwh);
  j["payment_eur_per_day"] = value_json(b.payment_eur_per_day, display::eur);
  j["savings_eur_per_day"] = value_json(b.savings_eur_per_day, display::eur);
  j["shower_savings_eur_per_day"] = value_json(b.shower_savings_eur_per_day, display::eur);
  j["extrapolated"] = is_extrapolated(profile.temp_reduction_c);
  j["stale"] = price.stale;
  return j;
}

/// One line: consumption, payment, then savings columns when they apply.
inline std::string breakdown_line(const HouseholdProfile& profile, const CostBreakdown& b) {
  std::string line = display::kwh(b.consumption_kwh_per_day) + "  " + display::eur(b.payment_eur_per_day);
  if (!profile.temp_reduction_c.is_zero()) line += "  " + display::eur(b.savings_eur_per_day);
  if (profile.cold_showers) line += "  " + display::eur(b.shower_savings_eur_per_day) + " (cold showers)";
  return line;
}

/// Published national figure that the computed household count is compared against.
inline const Decimal kPublishedGasHouseholds{20'500'000};

inline std::vector<std::string> national_notes(const NationalEstimate& e) {
  std::vector<std::string> notes;
  if (e.gas_heated_households != kPublishedGasHouseholds)
    notes.push_back("computed gas-heated households " + display::count_mio(e.gas_heated_households) +
                    " (apartments x gas share); the published text cites 20.5 Mio.");
  if (e.rounding == KwhRounding::rounded)
    notes.push_back("per-household consumption rounded to " + display::kwh(e.per_household_kwh_per_day) +
                    " before aggregation; use --rounding-mode unrounded for the exact chain");
  else
    notes.push_back("per-household consumption kept unrounded; the published national table uses a rounded "
                    "whole-kWh value");
  return notes;
}

inline Json national_json(const HousingStock& stock, const Decimal& price, const NationalEstimate& e,
                          const Decimal& temp_reduction_c = kReferenceReductionC) {
  Json j;
  j["inputs"] = {{"n_apartments", stock.n_apartments.to_string(0)},
                 {"avg_area_m2", stock.avg_area_m2.to_string(0)},
                 {"gas_heating_share", stock.gas_heating_share.to_string(0)},
                 {"temp_reduction_c", temp_reduction_c.to_string(0)},
                 {"rounding_mode", to_string(e.rounding)}};
  j["price_eur_mwh"] = value_json(price, display::price);
  j["gas_heated_households"] = value_json(e.gas_heated_households, display::count_mio);
  j["per_household_kwh_per_day"] = value_json(e.per_household_kwh_per_day, display::kwh);
  j["per_household_payment_eur_per_day"] = value_json(e.per_household_payment_eur_per_day, display::eur);
  j["total_consumption_twh_per_day"] = value_json(e.total_consumption_twh_per_day, display::twh);
  j["total_payment_eur_per_day"] = value_json(e.total_payment_eur_per_day, [](const Decimal& v) {
    return display::eur_mio(v, 0);
  });
  j["total_savings_eur_per_day"] = value_json(e.total_savings_eur_per_day, [](const Decimal& v) {
    return display::eur_mio(v, 1);
  });
  j["notes"] = national_notes(e);
  return j;
}

/// Aligned two-column text report.
inline std::string national_table(const HousingStock& stock, const ModelParams& params, const Decimal& price,
                                  const NationalEstimate& e, const Decimal& temp_reduction_c = kReferenceReductionC) {
  std::ostringstream os;
  auto row = [&](const std::string& label, const std::string& value) {
    // Pad by code points so labels with ² or ° line up.
    const auto width = std::count_if(label.begin(), label.end(), [](char c) { return (c & 0xC0) != 0x80; });
    os << label << std::string(static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, 64 - width)), ' ') << value << '\n';
  };
  row("Number of apartments", display::count_mio(stock.n_apartments));
  row("Average size of apartments", stock.avg_area_m2.to_string(0) + " m²");
  row("Share of apartments with gas heating", display::percent(stock.gas_heating_share));
  row("Gas-heated apartments", display::count_mio(e.gas_heated_households));
  row("Spot price", display::price(price));
  row("Daily gas consumption of a " + stock.avg_area_m2.to_string(0) + " m² apartment",
      display::kwh(e.per_household_kwh_per_day));
  row("Daily gas consumption of all gas-heated households", display::twh(e.total_consumption_twh_per_day));
  row("Daily payments to Russian gas suppliers (" + display::percent(params.russian_share) + " of consumption)",
      display::eur_mio(e.total_payment_eur_per_day, 0));
  row("Daily savings at " + temp_reduction_c.to_string(0) + " °C lower room temperature",
      display::eur_mio(e.total_savings_eur_per_day, 1));
  for (const auto& note : national_notes(e)) os << "note: " << note << '\n';
  return os.str();
}

inline std::string cumulative_display(const ScenarioResult& r) {
  return r.is_national() ? display::eur_mio(r.cumulative_savings_eur, 1) : display::eur(r.cumulative_savings_eur);
}

inline Json scenario_result_json(const ScenarioResult& r, const Scenario& s) {
  Json j;
  j["label"] = r.label;
  j["kind"] = r.is_national() ? "national" : "household";
  if (const auto* b = std::get_if<CostBreakdown>(&r.daily)) {
    const auto& profile = std::get<HouseholdProfile>(s.subject);
    j["daily"] = breakdown_json(profile, ResolvedPrice{r.price_eur_mwh, "scenario", r.staleness_flag}, *b);
  } else {
    const auto& target = std::get<NationalTarget>(s.subject);
    j["daily"] =
        national_json(target.stock, r.price_eur_mwh, std::get<NationalEstimate>(r.daily), target.temp_reduction_c);
  }
  auto money = [&](const Decimal& v) {
    return r.is_national() ? value_json(v, [](const Decimal& x) { return display::eur_mio(x, 1); })
                           : value_json(v, display::eur);
  };
  j["daily_payment_eur"] = money(r.daily_payment_eur);
  j["daily_savings_eur"] = money(r.daily_savings_eur);
  j["cumulative_savings_eur"] = money(r.cumulative_savings_eur);
  j["assumptions"] = {{"price_eur_mwh", raw(r.price_eur_mwh)},
                      {"days_remaining", r.days_remaining},
                      {"europe_multiplier", r.europe_multiplier.to_string(0)}};
  j["stale"] = r.staleness_flag;
  j["extrapolated"] = r.extrapolated;
  j["notes"] = r.notes;
  return j;
}

/// `results[i]` is the evaluation behind `rows[i]`; national rows display in millions.
inline Json comparison_json(const std::vector<ComparisonRow>& rows, const std::vector<ScenarioResult>& results) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const bool national = i < results.size() && results[i].is_national();
    auto money = [&](const Decimal& v) {
      return national ? value_json(v, [](const Decimal& x) { return display::eur_mio(x, 1); })
                      : value_json(v, display::eur);
    };
    Json j;
    j["label"] = row.label;
    j["daily_payment_eur"] = money(row.daily_payment_eur);
    j["daily_savings_eur"] = money(row.daily_savings_eur);
    j["net_payment_eur"] = money(row.net_payment_eur);
    j["cumulative_savings_eur"] = money(row.cumulative_savings_eur);
    j["delta_net_payment_eur"] = row.delta_net_payment_eur ? money(*row.delta_net_payment_eur) : Json(nullptr);
    j["delta_savings_eur"] = row.delta_savings_eur ? money(*row.delta_savings_eur) : Json(nullptr);
    arr.push_back(std::move(j));
  }
  return arr;
}

inline constexpr const char* kComparisonCsvHeader =
    "label,daily_payment_eur,daily_savings_eur,net_payment_eur,cumulative_savings_eur,delta_net_payment_eur,"
    "delta_savings_eur";

/// CSV with raw values; labels containing commas or quotes are quoted and
/// deltas against a baseline of the other kind are left empty.
inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << kComparisonCsvHeader << '\n';
  for (const auto& row : rows) {
    std::string label = row.label;
    if (label.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      label = quoted + "\"";
    }
    os << label << ',' << raw(row.daily_payment_eur) << ',' << raw(row.daily_savings_eur) << ','
       << raw(row.net_payment_eur) << ',' << raw(row.cumulative_savings_eur) << ','
       << (row.delta_net_payment_eur ? raw(*row.delta_net_payment_eur) : "") << ','
       << (row.delta_savings_eur ? raw(*row.delta_savings_eur) : "") << '\n';
  }
  return os.str();
}

inline std::string comparison_table(const std::vector<ComparisonRow>& rows, const std::vector<ScenarioResult>& results) {
  std::size_t label_width = 8;
  for (const auto& row : rows) label_width = std::max(label_width, row.label.size());
  label_width += 2;
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(label_width)) << "scenario" << std::right << std::setw(16)
     << "payment/day" << std::setw(16) << "savings/day" << std::setw(20) << "cumulative" << std::setw(18)
     << "delta net/day" << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const bool national = results[i].is_national();
    // "€" is three bytes; pad money cells by two extra so columns line up.
    auto money = [&](const Decimal& v) { return national ? display::eur_mio(v, 1) : display::eur(v); };
    os << std::left << std::setw(static_cast<int>(label_width)) << row.label << std::right << std::setw(18)
       << money(row.daily_payment_eur) << std::setw(18) << money(row.daily_savings_eur) << std::setw(22)
       << money(row.cumulative_savings_eur) << std::setw(row.delta_net_payment_eur ? 20 : 18)
       << (row.delta_net_payment_eur ? money(*row.delta_net_payment_eur) : "n/a") << '\n';
  }
  for (const auto& r : results)
    for (const auto& note : r.notes) os << "note [" << r.label << "]: " << note << '\n';
  return os.str();
}

inline Json stats_json(const PrePostStats& s) {
  Json j;
  j["split_date"] = s.split_date.to_string();
  j["pre_mean_eur_mwh"] = value_json(s.pre_mean, display::price);
  j["post_latest_eur_mwh"] = value_json(s.post_latest, display::price);
  j["ratio"] = value_json(s.ratio, [](const Decimal& v) { return "×" + quantize(v).to_fixed(2); });
  return j;
}

inline Json quotes_json(const PriceSeries& series) {
  Json arr = Json::array();
  for (const auto& q : series.quotes) arr.push_back({{"date", q.date.to_string()}, {"price_eur_mwh", raw(q.price)}});
  return arr;
}

/// Figure export: date, price, trailing calendar-window mean.
inline std::string figure_export(const PriceSeries& series, FeedFormat format, int window_days) {
  if (series.empty()) throw NoDataError("no quotes in the requested range");
  const auto means = rolling_mean(series, window_days);
  std::ostringstream os;
  if (format == FeedFormat::csv) {
    for (std::size_t i = 0; i < series.size(); ++i)
      os << series.quotes[i].date.to_string() << ',' << series.quotes[i].price.to_string() << ','
         << means[i].to_fixed(4) << '\n';
  } else {
    os << "[\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      os << "  {\"date\": \"" << series.quotes[i].date.to_string()
         << "\", \"price_eur_mwh\": " << series.quotes[i].price.to_string()
         << ", \"rolling_mean_eur_mwh\": " << means[i].to_fixed(4) << '}' << (i + 1 < series.size() ? ",\n" : "\n");
    }
    os << "]\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON input

inline Decimal decimal_from_json(const std::string& field, const Json& v) {
  if (v.is_number()) return parse_decimal_field(field, v.dump());
  if (v.is_string()) return parse_decimal_field(field, v.get<std::string>());
  throw InvalidArgument(field, "expected a number");
}

inline std::int64_t count_from_json(const std::string& field, const Json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) return parse_count_field(field, v.get<std::string>());
  throw InvalidArgument(field, "expected an integer");
}

/// Scenario request body. Exactly one of "household" / "national" must be
/// present; the price is "price_eur_mwh", "price_as_of" (looked up in the
/// store) or, when both are absent, `current_price`.
inline Scenario scenario_from_json(const Json& body, const HousingStock& default_stock, const PriceSource& current_price,
                                   std::shared_ptr<const PriceSeries> series, bool series_stale) {
  if (!body.is_object()) throw InvalidArgument("body", "expected a JSON object");
  const bool has_household = body.contains("household");
  const bool has_national = body.contains("national");
  if (has_household == has_national) throw InvalidArgument("household|national", "exactly one must be given");

  Scenario s;
  s.label = body.value("label", std::string(has_household ? "household" : "national"));
  if (has_household) {
    const auto& h = body.at("household");
    if (!h.is_object()) throw InvalidArgument("household", "expected an object");
    HouseholdProfile p;
    if (!h.contains("area_m2")) throw InvalidArgument("area_m2", "required");
    p.area_m2 = decimal_from_json("area_m2", h.at("area_m2"));
    if (h.contains("temp_reduction_c")) p.temp_reduction_c = decimal_from_json("temp_reduction_c", h.at("temp_reduction_c"));
    if (h.contains("cold_showers")) {
      if (!h.at("cold_showers").is_boolean()) throw InvalidArgument("cold_showers", "expected a boolean");
      p.cold_showers = h.at("cold_showers").get<bool>();
    }
    if (h.contains("persons")) p.persons = count_from_json("persons", h.at("persons"));
    p.check();
    s.subject = p;
  } else {
    const auto& n = body.at("national");
    if (!n.is_object()) throw InvalidArgument("national", "expected an object");
    NationalTarget t;
    t.stock = default_stock;
    for (const auto& key : housing_stock_keys())
      if (n.contains(key)) *housing_stock_field(t.stock, key) = decimal_from_json(key, n.at(key));
    t.stock.check();
    if (n.contains("temp_reduction_c")) t.temp_reduction_c = decimal_from_json("temp_reduction_c", n.at("temp_reduction_c"));
    if (t.temp_reduction_c.sign() < 0) throw InvalidArgument("temp_reduction_c", "must be >= 0");
    if (n.contains("rounding")) {
      if (!n.at("rounding").is_string()) throw InvalidArgument("rounding", "expected a string");
      t.rounding = parse_kwh_rounding(n.at("rounding").get<std::string>());
    }
    s.subject = t;
  }

  if (body.contains("price_eur_mwh")) {
    s.price = decimal_from_json("price_eur_mwh", body.at("price_eur_mwh"));
  } else if (body.contains("price_as_of")) {
    if (!body.at("price_as_of").is_string()) throw InvalidArgument("price_as_of", "expected YYYY-MM-DD");
    Date as_of;
    try {
      as_of = Date::parse(body.at("price_as_of").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InvalidArgument("price_as_of", e.what());
    }
    s.price = SeriesPrice{std::move(series), as_of, series_stale};
  } else {
    s.price = current_price;
  }
  if (body.contains("europe_multiplier")) s.europe_multiplier = decimal_from_json("europe_multiplier", body.at("europe_multiplier"));
  if (body.contains("days_remaining")) s.days_remaining = count_from_json("days_remaining", body.at("days_remaining"));
  s.check();
  return s;
}

}  // namespace heatcost
