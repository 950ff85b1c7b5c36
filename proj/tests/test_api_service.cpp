#include "heatcost/api_service.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

using namespace heatcost;
using namespace heatcost::literals;

namespace {

std::shared_ptr<PriceStore> fixture_store() {
  std::ifstream in(std::string(HEATCOST_FIXTURES) + "/the_spot_2022.csv");
  std::stringstream buf;
  buf << in.rdbuf();
  auto store = std::make_shared<PriceStore>();
  auto series = validate_series(parse_price_feed(buf.str(), FeedFormat::csv));
  series.source_label = "fixture";
  store->ingest(series, {"fixture", {}, false});
  return store;
}

Json get(const ApiService& api, const std::string& path, const QueryParams& q, int expected_status = 200) {
  const auto r = api.handle("GET", path, q, "");
  EXPECT_EQ(r.status, expected_status) << r.body;
  return Json::parse(r.body);
}

Json post(const ApiService& api, const std::string& path, const std::string& body, int expected_status = 200) {
  const auto r = api.handle("POST", path, {}, body);
  EXPECT_EQ(r.status, expected_status) << r.body;
  return Json::parse(r.body);
}

}  // namespace

TEST(Prices, FullRangeHasDoubledClose) {
  ApiService api(fixture_store(), {}, {});
  const auto j = get(api, "/api/v1/prices", {});
  ASSERT_EQ(j["quotes"].size(), 32u);
  EXPECT_EQ(j["quotes"].back()["price_eur_mwh"], "160.0000000000");
  EXPECT_EQ(j["stats"]["ratio"]["display"], "×2.00");
  EXPECT_EQ(j["stats"]["pre_mean_eur_mwh"]["raw"], "80.0000000000");
  EXPECT_EQ(j["stale"], false);
}

TEST(Prices, RangeFiltering) {
  ApiService api(fixture_store(), {}, {});
  EXPECT_EQ(get(api, "/api/v1/prices", {{"from", "2022-02-24"}})["quotes"].size(), 6u);
  EXPECT_EQ(get(api, "/api/v1/prices", {{"from", "2022-03-03"}, {"to", "2022-03-01"}})["quotes"].size(), 0u);
  const auto bad = get(api, "/api/v1/prices", {{"from", "March"}}, 400);
  EXPECT_EQ(bad["code"], "bad_request");
  EXPECT_EQ(bad["detail"]["field"], "from");
}

TEST(Prices, NoDataBeforeIngest) {
  ApiService api(std::make_shared<PriceStore>(), {}, {});
  EXPECT_EQ(get(api, "/api/v1/prices", {}, 404)["code"], "no_data");
}

TEST(Estimate, AverageHouseholdAtStorePrice) {
  ApiService api(fixture_store(), {}, {});
  const auto j = get(api, "/api/v1/estimate", {{"area_m2", "92"}, {"temp_reduction_c", "2"}});
  EXPECT_EQ(j["payment_eur_per_day"]["display"], "€5.72");
  EXPECT_EQ(j["savings_eur_per_day"]["display"], "€0.69");
  EXPECT_EQ(j["consumption_kwh_per_day"]["display"], "72 kWh");
  EXPECT_EQ(j["price_source"], "store");
}

TEST(Estimate, NoReductionMeansNoSavings) {
  ApiService api(fixture_store(), {}, {});
  const auto j = get(api, "/api/v1/estimate", {{"area_m2", "92"}, {"temp_reduction_c", "0"}});
  EXPECT_EQ(j["savings_eur_per_day"]["raw"], "0.0000000000");
  EXPECT_EQ(j["savings_eur_per_day"]["display"], "€0.00");
}

TEST(Estimate, BadRequestsNameTheField) {
  ApiService api(fixture_store(), {}, {});
  auto j = get(api, "/api/v1/estimate", {{"area_m2", "-5"}}, 400);
  EXPECT_EQ(j["code"], "bad_request");
  EXPECT_EQ(j["detail"]["field"], "area_m2");
  EXPECT_EQ(get(api, "/api/v1/estimate", {}, 400)["detail"]["field"], "area_m2");
  EXPECT_EQ(get(api, "/api/v1/estimate", {{"area_m2", "92"}, {"persons", "two"}}, 400)["detail"]["field"], "persons");
  EXPECT_EQ(get(api, "/api/v1/estimate", {{"area_m2", "92"}, {"cold_showers", "maybe"}}, 400)["detail"]["field"],
            "cold_showers");
}

TEST(Estimate, FallsBackToDefaultPriceWithoutSeries) {
  ApiService api(std::make_shared<PriceStore>(), {}, {});
  const auto j = get(api, "/api/v1/estimate", {{"area_m2", "92"}});
  EXPECT_EQ(j["price_source"], "default");
  EXPECT_EQ(j["payment_eur_per_day"]["display"], "€5.72");
}

TEST(Scenario, NationalProjection) {
  ApiService api(fixture_store(), {}, {});
  const auto j = post(api, "/api/v1/scenario", R"({"national": {"temp_reduction_c": 2}, "price_eur_mwh": 160})");
  EXPECT_NEAR(std::stod(j["cumulative_savings_eur"]["raw"].get<std::string>()), 380.7e6, 1e6);
  EXPECT_EQ(j["assumptions"]["days_remaining"], 27);
  EXPECT_EQ(j["assumptions"]["europe_multiplier"], "1");
  EXPECT_EQ(j["assumptions"]["price_eur_mwh"], "160.0000000000");
}

TEST(Scenario, DefaultsToStorePriceAndAsOfLookup) {
  ApiService api(fixture_store(), {}, {});
  auto j = post(api, "/api/v1/scenario", R"({"household": {"area_m2": 92, "temp_reduction_c": 2}})");
  EXPECT_EQ(j["daily"]["payment_eur_per_day"]["display"], "€5.72");
  j = post(api, "/api/v1/scenario", R"({"household": {"area_m2": 92}, "price_as_of": "2022-02-26"})");
  EXPECT_EQ(j["assumptions"]["price_eur_mwh"], "118.0000000000");  // carried forward from 02-25
  j = post(api, "/api/v1/scenario", R"({"household": {"area_m2": 92}, "price_as_of": "2021-01-01"})", 404);
  EXPECT_EQ(j["code"], "no_data");
}

TEST(Scenario, ZeroDaysAndBadBodies) {
  ApiService api(fixture_store(), {}, {});
  auto j = post(api, "/api/v1/scenario", R"({"national": {}, "days_remaining": 0})");
  EXPECT_EQ(j["cumulative_savings_eur"]["raw"], "0.0000000000");
  EXPECT_EQ(post(api, "/api/v1/scenario", "{not json", 400)["code"], "bad_request");
  EXPECT_EQ(post(api, "/api/v1/scenario", R"({"national": {}, "days_remaining": -3})", 400)["detail"]["field"],
            "days_remaining");
}

TEST(Routing, UnknownPathsAndMethods) {
  ApiService api(fixture_store(), {}, {});
  EXPECT_EQ(get(api, "/api/v1/nothing", {}, 404)["code"], "not_found");
  EXPECT_EQ(post(api, "/api/v1/estimate", "", 405)["code"], "method_not_allowed");
}

TEST(Responses, ByteIdenticalForSameStateAndQuery) {
  ApiService api(fixture_store(), {}, {});
  const QueryParams q{{"area_m2", "77.5"}, {"temp_reduction_c", "1.5"}, {"cold_showers", "true"}, {"persons", "3"}};
  EXPECT_EQ(api.handle("GET", "/api/v1/estimate", q, "").body, api.handle("GET", "/api/v1/estimate", q, "").body);
  EXPECT_EQ(api.handle("GET", "/api/v1/prices", {}, "").body, api.handle("GET", "/api/v1/prices", {}, "").body);
}

TEST(Responses, DisplayStringsMatchRoundedRaw) {
  ApiService api(fixture_store(), {}, {});
  for (const char* area : {"20", "33.3", "92", "150", "199.9"}) {
    for (const char* reduction : {"0", "0.5", "2", "4.5"}) {
      const auto j = get(api, "/api/v1/estimate",
                         {{"area_m2", area}, {"temp_reduction_c", reduction}, {"cold_showers", "1"}});
      auto raw_of = [&](const char* field) { return Decimal::parse(j[field]["raw"].get<std::string>()); };
      EXPECT_EQ(j["consumption_kwh_per_day"]["display"], raw_of("consumption_kwh_per_day").to_fixed(0) + " kWh");
      for (const char* money : {"payment_eur_per_day", "savings_eur_per_day", "shower_savings_eur_per_day"})
        EXPECT_EQ(j[money]["display"], "€" + raw_of(money).to_fixed(2)) << money;
    }
  }
}

TEST(Server, ServesOverHttpWithCors) {
  ApiService api(fixture_store(), {}, {});
  const int port = api.bind_any("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread server([&] { api.listen_after_bind(); });
  api.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/v1/estimate?area_m2=120&temp_reduction_c=2");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(Json::parse(res->body)["payment_eur_per_day"]["display"], "€7.47");
  res = client.Post("/api/v1/scenario", R"({"national": {}, "price_eur_mwh": 160})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  api.stop();
  server.join();
}

TEST(OpenApi, DescribesEveryRoute) {
  std::ifstream in(std::string(HEATCOST_FIXTURES) + "/../docs/openapi.json");
  ASSERT_TRUE(in);
  const auto doc = Json::parse(in);
  ApiService api(fixture_store(), {}, {});
  std::vector<std::string> paths;
  for (const auto& [path, ops] : doc.at("paths").items()) {
    paths.push_back(path);
    for (const auto& [method, unused] : ops.items()) {
      std::string upper = method;
      for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      const auto r = api.handle(upper, path, {}, "{}");
      const auto code = Json::parse(r.body).value("code", "");
      EXPECT_NE(code, "not_found") << upper << ' ' << path;
      EXPECT_NE(code, "method_not_allowed") << upper << ' ' << path;
    }
  }
  std::sort(paths.begin(), paths.end());
  EXPECT_EQ(paths, (std::vector<std::string>{"/api/v1/estimate", "/api/v1/prices", "/api/v1/scenario"}));
}
