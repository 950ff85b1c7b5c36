#pragma once

// Household heating-cost attribution.
//
// floor area -> daily gas consumption -> daily payment to Russian suppliers
// -> savings from lowering the room temperature and from cold showers, plus
// the national roll-up over the gas-heated housing stock. Every function
// returns exact, unrounded values; rounding is left to the report layer.

#include "heatcost/decimal.hpp"
#include "heatcost/error.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace heatcost {

/// Current spot price used when no series or override is available (EUR/MWh).
inline const Decimal kDefaultPriceEurMwh{160};

/// Temperature reduction with a directly stated savings rate (degrees C).
inline const Decimal kReferenceReductionC{2};

struct ModelParams {
  // 140 kWh/m²/year over 180 heating days is the integer intensity that puts
  // every household-size row (40..120 m², 92 m²) on its published kWh value.
  Decimal intensity_kwh_per_m2_year{140};
  Decimal heating_days_per_year{180};
  Decimal russian_share = Decimal::parse("0.5");
  Decimal savings_rate_per_2c = Decimal::parse("0.12");
  Decimal shower_annual_kwh_per_person{550};
  Decimal shower_water_liters_per_day{40};
  Decimal days_per_year_for_showers{365};

  void check() const {
    require_positive("intensity_kwh_per_m2_year", intensity_kwh_per_m2_year);
    require_positive("heating_days_per_year", heating_days_per_year);
    require_positive("russian_share", russian_share);
    if (russian_share > Decimal(1)) throw InvalidArgument("russian_share", "must be in (0, 1]");
    if (savings_rate_per_2c.sign() < 0 || savings_rate_per_2c >= Decimal(1))
      throw InvalidArgument("savings_rate_per_2c", "must be in [0, 1)");
    require_positive("shower_annual_kwh_per_person", shower_annual_kwh_per_person);
    require_positive("shower_water_liters_per_day", shower_water_liters_per_day);
    require_positive("days_per_year_for_showers", days_per_year_for_showers);
  }

  static void require_positive(const std::string& field, const Decimal& v) {
    if (v.sign() <= 0) throw InvalidArgument(field, "must be > 0");
  }
};

struct HousingStock {
  Decimal n_apartments{42'500'000};
  Decimal avg_area_m2{92};
  Decimal gas_heating_share = Decimal::parse("0.48");

  void check() const {
    if (n_apartments.sign() <= 0) throw InvalidArgument("n_apartments", "must be > 0");
    if (avg_area_m2.sign() <= 0) throw InvalidArgument("avg_area_m2", "must be > 0");
    if (gas_heating_share.sign() < 0 || gas_heating_share > Decimal(1))
      throw InvalidArgument("gas_heating_share", "must be in [0, 1]");
  }
};

struct HouseholdProfile {
  Decimal area_m2{92};
  Decimal temp_reduction_c{0};
  bool cold_showers = false;
  std::int64_t persons = 1;

  void check() const {
    if (area_m2.sign() <= 0) throw InvalidArgument("area_m2", "must be > 0");
    if (temp_reduction_c.sign() < 0) throw InvalidArgument("temp_reduction_c", "must be >= 0");
    if (persons < 1) throw InvalidArgument("persons", "must be >= 1");
  }
};

struct CostBreakdown {
  Decimal consumption_kwh_per_day;
  Decimal payment_eur_per_day;
  Decimal savings_eur_per_day;
  Decimal shower_savings_eur_per_day;
};

struct ShowerCost {
  Decimal kwh_per_shower;
  Decimal eur_per_shower;
};

/// How the per-household kWh enters the national roll-up.
enum class KwhRounding { rounded, unrounded };

inline KwhRounding parse_kwh_rounding(std::string_view name) {
  if (name == "rounded") return KwhRounding::rounded;
  if (name == "unrounded") return KwhRounding::unrounded;
  throw InvalidArgument("rounding_mode", "expected 'rounded' or 'unrounded', got '" + std::string(name) + "'");
}

inline std::string to_string(KwhRounding r) { return r == KwhRounding::rounded ? "rounded" : "unrounded"; }

struct NationalEstimate {
  Decimal gas_heated_households;
  Decimal per_household_kwh_per_day;  // after the rounding mode is applied
  Decimal per_household_payment_eur_per_day;
  Decimal total_consumption_kwh_per_day;
  Decimal total_consumption_twh_per_day;
  Decimal total_payment_eur_per_day;
  Decimal total_savings_eur_per_day;
  KwhRounding rounding = KwhRounding::rounded;
};

inline Decimal daily_consumption(const Decimal& area_m2, const ModelParams& params) {
  if (area_m2.sign() <= 0) throw InvalidArgument("area_m2", "must be > 0");
  return area_m2 * params.intensity_kwh_per_m2_year / params.heating_days_per_year;
}

/// kWh/day times EUR/MWh times the attributed share. 1 MWh = 1000 kWh.
inline Decimal daily_payment(const Decimal& consumption_kwh, const Decimal& price_eur_mwh,
                             const Decimal& russian_share) {
  if (consumption_kwh.sign() < 0) throw InvalidArgument("consumption_kwh", "must be >= 0");
  if (price_eur_mwh.sign() < 0) throw InvalidArgument("price_eur_mwh", "must be >= 0");
  if (russian_share.sign() < 0) throw InvalidArgument("russian_share", "must be >= 0");
  return consumption_kwh * (price_eur_mwh / Decimal(1000)) * russian_share;
}

/// True when the reduction is neither zero nor the reference 2 degrees, i.e.
/// when the savings rate is extrapolated linearly.
inline bool is_extrapolated(const Decimal& temp_reduction_c) {
  return !temp_reduction_c.is_zero() && temp_reduction_c != kReferenceReductionC;
}

/// Linear in the reduction (savings_rate_per_2c per 2 degrees), capped at the full payment.
inline Decimal temperature_savings(const Decimal& payment_eur_per_day, const Decimal& temp_reduction_c,
                                   const ModelParams& params) {
  if (payment_eur_per_day.sign() < 0) throw InvalidArgument("payment_eur_per_day", "must be >= 0");
  if (temp_reduction_c.sign() < 0) throw InvalidArgument("temp_reduction_c", "must be >= 0");
  const Decimal fraction = min(Decimal(1), temp_reduction_c / kReferenceReductionC * params.savings_rate_per_2c);
  return payment_eur_per_day * fraction;
}

inline ShowerCost shower_cost(const Decimal& price_eur_mwh, const ModelParams& params) {
  if (price_eur_mwh.sign() < 0) throw InvalidArgument("price_eur_mwh", "must be >= 0");
  ShowerCost c;
  c.kwh_per_shower = params.shower_annual_kwh_per_person / params.days_per_year_for_showers;
  c.eur_per_shower = daily_payment(c.kwh_per_shower, price_eur_mwh, params.russian_share);
  return c;
}

/// Heating depends on area only; `persons` scales the shower savings.
inline CostBreakdown household_breakdown(const HouseholdProfile& profile, const Decimal& price_eur_mwh,
                                         const ModelParams& params) {
  profile.check();
  params.check();
  CostBreakdown b;
  b.consumption_kwh_per_day = daily_consumption(profile.area_m2, params);
  b.payment_eur_per_day = daily_payment(b.consumption_kwh_per_day, price_eur_mwh, params.russian_share);
  b.savings_eur_per_day = temperature_savings(b.payment_eur_per_day, profile.temp_reduction_c, params);
  b.shower_savings_eur_per_day =
      profile.cold_showers ? Decimal(profile.persons) * shower_cost(price_eur_mwh, params).eur_per_shower : Decimal(0);
  return b;
}

/// Scales the average gas-heated household to the national housing stock.
/// With KwhRounding::rounded the per-household kWh is rounded to a whole kWh
/// before multiplying out, which is how the published national table is built.
inline NationalEstimate national_estimate(const HousingStock& stock, const Decimal& price_eur_mwh,
                                          const ModelParams& params, KwhRounding rounding,
                                          const Decimal& temp_reduction_c = kReferenceReductionC) {
  stock.check();
  params.check();
  NationalEstimate e;
  e.rounding = rounding;
  e.gas_heated_households = stock.n_apartments * stock.gas_heating_share;
  const Decimal kwh = daily_consumption(stock.avg_area_m2, params);
  e.per_household_kwh_per_day = rounding == KwhRounding::rounded ? kwh.rounded(0) : kwh;
  e.per_household_payment_eur_per_day =
      daily_payment(e.per_household_kwh_per_day, price_eur_mwh, params.russian_share);
  e.total_consumption_kwh_per_day = e.gas_heated_households * e.per_household_kwh_per_day;
  e.total_consumption_twh_per_day = e.total_consumption_kwh_per_day / Decimal(1'000'000'000);
  e.total_payment_eur_per_day = daily_payment(e.total_consumption_kwh_per_day, price_eur_mwh, params.russian_share);
  e.total_savings_eur_per_day =
      e.gas_heated_households * temperature_savings(e.per_household_payment_eur_per_day, temp_reduction_c, params);
  return e;
}

}  // namespace heatcost
