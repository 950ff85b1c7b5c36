#include "heatcost/cost_model.hpp"
#include "heatcost/report.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace heatcost;
using namespace heatcost::literals;

namespace {

const ModelParams kDefaults{};

}  // namespace

// The intensity constant is not stated directly; it is the only integer value
// that puts all six household rows on their published kWh figures.
TEST(Calibration, IntensityIsUniqueIntegerReproducingAllRows) {
  const std::vector<std::pair<int, int>> rows = {{40, 31}, {60, 47}, {80, 62}, {100, 78}, {120, 93}, {92, 72}};
  EXPECT_EQ(oracle::consistent_intensities(rows, 50, 400), std::vector<int>{140});
  // Back-solving from the 92 m² row alone gives a slightly different figure.
  EXPECT_NEAR(72.0 * 180.0 / 92.0, 140.87, 0.01);
}

TEST(DailyConsumption, MatchesOracleAndPublishedRows) {
  struct Row { int area; const char* raw4; const char* shown; };
  for (const auto& row : {Row{92, "71.5556", "72 kWh"}, Row{40, "31.1111", "31 kWh"}, Row{120, "93.3333", "93 kWh"}}) {
    const auto kwh = daily_consumption(Decimal(row.area), kDefaults);
    EXPECT_EQ(kwh.to_fixed(4), row.raw4);
    EXPECT_EQ(display::kwh(kwh), row.shown);
    EXPECT_NEAR(kwh.to_double(), static_cast<double>(oracle::consumption(row.area)), 1e-12);
  }
}

TEST(DailyConsumption, RejectsNonPositiveArea) {
  EXPECT_THROW(daily_consumption(0_d, kDefaults), InvalidArgument);
  EXPECT_THROW(daily_consumption(-5_d, kDefaults), InvalidArgument);
}

TEST(DailyPayment, PublishedCells) {
  const auto p92 = daily_payment(daily_consumption(92_d, kDefaults), 160_d, 0.5_d);
  EXPECT_EQ(p92.to_fixed(4), "5.7244");
  EXPECT_EQ(display::eur(p92), "€5.72");
  const auto p40 = daily_payment(daily_consumption(40_d, kDefaults), 160_d, 0.5_d);
  EXPECT_EQ(p40.to_fixed(4), "2.4889");
  EXPECT_EQ(display::eur(p40), "€2.49");
  const auto p120 = daily_payment(daily_consumption(120_d, kDefaults), 160_d, 0.5_d);
  EXPECT_EQ(p120.to_fixed(4), "7.4667");
  EXPECT_EQ(display::eur(p120), "€7.47");
}

TEST(DailyPayment, RoundedKwhWouldMissThePublishedValue) {
  // 72 kWh * 0.16 * 0.5 = 5.76, not 5.72: the per-household chain must stay unrounded.
  EXPECT_EQ(display::eur(daily_payment(72_d, 160_d, 0.5_d)), "€5.76");
}

TEST(DailyPayment, ZeroPriceAndErrors) {
  EXPECT_EQ(daily_payment(71_d, 0_d, 0.5_d), 0_d);
  EXPECT_THROW(daily_payment(-1_d, 160_d, 0.5_d), InvalidArgument);
  EXPECT_THROW(daily_payment(1_d, -160_d, 0.5_d), InvalidArgument);
  EXPECT_THROW(daily_payment(1_d, 160_d, -0.5_d), InvalidArgument);
}

TEST(DailyPayment, EurPerKwhPathAgrees) {
  const auto kwh = daily_consumption(77_d, kDefaults);
  const Decimal eur_per_kwh = 160_d / 1000_d;
  EXPECT_EQ(daily_payment(kwh, 160_d, 0.5_d), kwh * eur_per_kwh * 0.5_d);
}

TEST(TemperatureSavings, PublishedCellsAndBounds) {
  const auto p92 = daily_payment(daily_consumption(92_d, kDefaults), 160_d, 0.5_d);
  const auto s92 = temperature_savings(p92, 2_d, kDefaults);
  EXPECT_EQ(s92.to_fixed(4), "0.6869");
  EXPECT_EQ(display::eur(s92), "€0.69");
  const auto p120 = daily_payment(daily_consumption(120_d, kDefaults), 160_d, 0.5_d);
  EXPECT_EQ(temperature_savings(p120, 2_d, kDefaults).to_fixed(4), "0.8960");
  EXPECT_EQ(temperature_savings(5_d, 0_d, kDefaults), 0_d);
  EXPECT_EQ(temperature_savings(10_d, 40_d, kDefaults), 10_d);
  EXPECT_THROW(temperature_savings(10_d, -1_d, kDefaults), InvalidArgument);
}

TEST(TemperatureSavings, LinearPerDegreeBelowClamp) {
  EXPECT_EQ(temperature_savings(10_d, 1_d, kDefaults), 0.6_d);
  EXPECT_EQ(temperature_savings(10_d, 3_d, kDefaults), 1.8_d);
  EXPECT_TRUE(is_extrapolated(3_d));
  EXPECT_FALSE(is_extrapolated(2_d));
  EXPECT_FALSE(is_extrapolated(0_d));
}

TEST(ShowerCost, PublishedFigures) {
  const auto c = shower_cost(160_d, kDefaults);
  EXPECT_EQ(c.kwh_per_shower.to_fixed(4), "1.5068");
  EXPECT_EQ(c.eur_per_shower.to_fixed(4), "0.1205");
  EXPECT_EQ(display::kwh1(c.kwh_per_shower), "1.5 kWh");
  EXPECT_EQ(display::eur(c.eur_per_shower), "€0.12");
  EXPECT_NEAR(c.eur_per_shower.to_double(), static_cast<double>(oracle::payment(oracle::shower_kwh())), 1e-12);
}

TEST(ShowerCost, ZeroPriceAndUnitIdentity) {
  EXPECT_EQ(shower_cost(0_d, kDefaults).eur_per_shower, 0_d);
  ModelParams p;
  p.shower_annual_kwh_per_person = 365_d;
  p.days_per_year_for_showers = 365_d;
  p.russian_share = 1_d;
  const auto c = shower_cost(1000_d, p);
  EXPECT_EQ(c.kwh_per_shower, 1_d);
  EXPECT_EQ(c.eur_per_shower, 1_d);
}

TEST(HouseholdBreakdown, AverageHouseholdRow) {
  const auto b = household_breakdown({92_d, 2_d, false, 1}, 160_d, kDefaults);
  EXPECT_EQ(b.consumption_kwh_per_day.to_fixed(4), "71.5556");
  EXPECT_EQ(b.payment_eur_per_day.to_fixed(4), "5.7244");
  EXPECT_EQ(b.savings_eur_per_day.to_fixed(4), "0.6869");
  EXPECT_EQ(b.shower_savings_eur_per_day, 0_d);
}

TEST(HouseholdBreakdown, HundredSquareMetresNoReduction) {
  const auto b = household_breakdown({100_d, 0_d, false, 1}, 160_d, kDefaults);
  EXPECT_EQ(b.consumption_kwh_per_day.to_fixed(4), "77.7778");
  EXPECT_EQ(b.payment_eur_per_day.to_fixed(4), "6.2222");
  EXPECT_EQ(display::kwh(b.consumption_kwh_per_day), "78 kWh");
  EXPECT_EQ(display::eur(b.payment_eur_per_day), "€6.22");
  EXPECT_EQ(b.savings_eur_per_day, 0_d);
}

TEST(HouseholdBreakdown, ColdShowersScaleWithPersonsOnly) {
  const auto b = household_breakdown({92_d, 0_d, true, 2}, 160_d, kDefaults);
  const long double expected = 2 * oracle::payment(oracle::shower_kwh());
  EXPECT_NEAR(b.shower_savings_eur_per_day.to_double(), static_cast<double>(expected), 1e-12);
  EXPECT_EQ(b.shower_savings_eur_per_day.to_fixed(4), "0.2411");
  const auto single = household_breakdown({92_d, 0_d, true, 1}, 160_d, kDefaults);
  EXPECT_EQ(single.consumption_kwh_per_day, b.consumption_kwh_per_day);
  EXPECT_EQ(single.payment_eur_per_day, b.payment_eur_per_day);
}

TEST(HouseholdBreakdown, InvalidProfile) {
  EXPECT_THROW(household_breakdown({0_d, 0_d, false, 1}, 160_d, kDefaults), InvalidArgument);
  EXPECT_THROW(household_breakdown({92_d, -1_d, false, 1}, 160_d, kDefaults), InvalidArgument);
  EXPECT_THROW(household_breakdown({92_d, 0_d, true, 0}, 160_d, kDefaults), InvalidArgument);
}

TEST(NationalEstimate, RoundedModeMatchesPublishedTable) {
  const auto e = national_estimate(HousingStock{}, 160_d, kDefaults, KwhRounding::rounded);
  const auto o = oracle::national(true);
  EXPECT_EQ(e.gas_heated_households, Decimal(20'400'000));
  EXPECT_EQ(e.per_household_kwh_per_day, 72_d);
  EXPECT_EQ(e.total_consumption_twh_per_day, 1.4688_d);
  EXPECT_EQ(display::twh(e.total_consumption_twh_per_day), "1.47 TWh");
  EXPECT_EQ(e.total_payment_eur_per_day, 117'504'000_d);
  EXPECT_EQ(display::eur_mio(e.total_payment_eur_per_day), "€117 Mio.");
  EXPECT_NEAR(e.total_payment_eur_per_day.to_double(), static_cast<double>(o.payment), 1e-3);
  EXPECT_NEAR(e.total_savings_eur_per_day.to_double(), static_cast<double>(o.savings), 1e-3);
  EXPECT_EQ(display::eur_mio(e.total_savings_eur_per_day, 1), "€14.1 Mio.");
}

TEST(NationalEstimate, UnroundedModeMatchesOracle) {
  const auto e = national_estimate(HousingStock{}, 160_d, kDefaults, KwhRounding::unrounded);
  const auto o = oracle::national(false);
  EXPECT_NEAR(e.total_consumption_twh_per_day.to_double(), static_cast<double>(o.twh), 1e-12);
  EXPECT_EQ(e.total_consumption_twh_per_day.to_fixed(4), "1.4597");
  EXPECT_EQ(display::twh(e.total_consumption_twh_per_day), "1.46 TWh");
  EXPECT_NEAR(e.total_payment_eur_per_day.to_double(), 116.8e6, 0.1e6);
  EXPECT_NEAR(e.total_payment_eur_per_day.to_double(), static_cast<double>(o.payment), 1e-3);
}

TEST(NationalEstimate, ZeroGasShareGivesZeros) {
  HousingStock stock;
  stock.gas_heating_share = 0_d;
  const auto e = national_estimate(stock, 160_d, kDefaults, KwhRounding::rounded);
  EXPECT_EQ(e.gas_heated_households, 0_d);
  EXPECT_EQ(e.total_consumption_twh_per_day, 0_d);
  EXPECT_EQ(e.total_payment_eur_per_day, 0_d);
  EXPECT_EQ(e.total_savings_eur_per_day, 0_d);
}

TEST(ModelParams, InvariantsAreChecked) {
  ModelParams p;
  p.russian_share = 1.5_d;
  EXPECT_THROW(p.check(), InvalidArgument);
  p = {};
  p.savings_rate_per_2c = 1_d;
  EXPECT_THROW(p.check(), InvalidArgument);
  p = {};
  p.heating_days_per_year = 0_d;
  EXPECT_THROW(p.check(), InvalidArgument);
  HousingStock s;
  s.gas_heating_share = 1.01_d;
  EXPECT_THROW(s.check(), InvalidArgument);
}
