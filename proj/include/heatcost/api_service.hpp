#pragma once

// Read-only JSON API over the price store, cost model and scenario engine.
//
//   GET  /api/v1/prices?from=YYYY-MM-DD&to=YYYY-MM-DD
//   GET  /api/v1/estimate?area_m2=&temp_reduction_c=&cold_showers=&persons=[&price=]
//   POST /api/v1/scenario
//
// Errors are {"code", "message"[, "detail"]} with code one of
// bad_request, no_data, not_found, method_not_allowed, internal.

#include "heatcost/cost_model.hpp"
#include "heatcost/price_store.hpp"
#include "heatcost/report.hpp"
#include "heatcost/scenario_engine.hpp"

#include <httplib.h>
#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace heatcost {

struct ApiConfig {
  Date split_date = kWarStart;
  std::string cors_origin = "*";  // empty disables the header
};

struct ApiResponse {
  int status = 200;
  std::string body;
};

using QueryParams = std::map<std::string, std::string>;

inline ApiResponse api_error(int status, const std::string& code, const std::string& message,
                             const Json& detail = nullptr) {
  Json j;
  j["code"] = code;
  j["message"] = message;
  if (!detail.is_null()) j["detail"] = detail;
  return {status, j.dump()};
}

inline ApiResponse api_ok(const Json& j) { return {200, j.dump()}; }

class ApiService {
 public:
  ApiService(std::shared_ptr<PriceStore> store, ModelParams params, HousingStock stock, ApiConfig config = {})
      : store_(std::move(store)), params_(std::move(params)), stock_(std::move(stock)), config_(std::move(config)) {
    params_.check();
    stock_.check();
  }

  ApiResponse handle(std::string_view method, std::string_view path, const QueryParams& query,
                     std::string_view body) const {
    try {
      if (path == "/api/v1/prices") {
        if (method != "GET") return api_error(405, "method_not_allowed", "use GET");
        return prices(query);
      }
      if (path == "/api/v1/estimate") {
        if (method != "GET") return api_error(405, "method_not_allowed", "use GET");
        return estimate(query);
      }
      if (path == "/api/v1/scenario") {
        if (method != "POST") return api_error(405, "method_not_allowed", "use POST");
        return scenario(body);
      }
      return api_error(404, "not_found", "no route for " + std::string(path));
    } catch (const InvalidArgument& e) {
      return api_error(400, "bad_request", e.what(), Json{{"field", e.field()}});
    } catch (const ConfigError& e) {
      return api_error(400, "bad_request", e.what());
    } catch (const NoDataError& e) {
      return api_error(404, "no_data", e.what());
    } catch (const std::exception& e) {
      return api_error(500, "internal", e.what());
    }
  }

  /// Binds and serves until stop() is called. Returns false if binding failed.
  bool listen(const std::string& host, int port) {
    install_routes();
    return server_.listen(host, port);
  }

  /// Binds to an ephemeral port; serve with listen_after_bind().
  int bind_any(const std::string& host) {
    install_routes();
    return server_.bind_to_any_port(host);
  }

  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool is_running() const { return server_.is_running(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  ApiResponse prices(const QueryParams& query) const {
    const auto snap = store_ ? store_->snapshot() : nullptr;
    if (!snap || snap->series.empty()) throw NoDataError("no price series loaded");
    const auto from = optional_date(query, "from");
    const auto to = optional_date(query, "to");
    const auto range = (from && to && *from > *to) ? PriceSeries{} : slice(snap->series, from, to);

    Json j;
    j["source"] = snap->series.source_label;
    j["origin"] = snap->provenance.origin;
    j["stale"] = snap->provenance.stale;
    j["quotes"] = quotes_json(range);
    try {
      j["stats"] = stats_json(price_stats(snap->series, config_.split_date));
    } catch (const NoDataError&) {
      j["stats"] = nullptr;
    }
    return api_ok(j);
  }

  ApiResponse estimate(const QueryParams& query) const {
    HouseholdProfile p;
    const auto area = find(query, "area_m2");
    if (!area) throw InvalidArgument("area_m2", "required");
    p.area_m2 = parse_decimal_field("area_m2", *area);
    if (auto v = find(query, "temp_reduction_c")) p.temp_reduction_c = parse_decimal_field("temp_reduction_c", *v);
    if (auto v = find(query, "cold_showers")) p.cold_showers = parse_bool_field("cold_showers", *v);
    if (auto v = find(query, "persons")) p.persons = parse_count_field("persons", *v);
    p.check();
    std::optional<Decimal> override_price;
    if (auto v = find(query, "price")) override_price = parse_decimal_field("price", *v);

    const auto price = resolve_current_price(store_ ? store_->snapshot() : nullptr, override_price);
    const auto b = household_breakdown(p, price.value, params_);
    return api_ok(breakdown_json(p, price, b));
  }

  ApiResponse scenario(std::string_view body) const {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      return api_error(400, "bad_request", std::string("malformed JSON: ") + e.what(), Json{{"field", "body"}});
    }
    const auto snap = store_ ? store_->snapshot() : nullptr;
    const auto current = resolve_current_price(snap, std::nullopt);
    std::shared_ptr<const PriceSeries> series;
    if (snap) series = std::shared_ptr<const PriceSeries>(snap, &snap->series);
    const PriceSource current_source =
        current.source == "store" ? PriceSource(SeriesPrice{series, snap->series.back().date, current.stale})
                                  : PriceSource(current.value);
    const auto s = scenario_from_json(j, stock_, current_source, series, snap && snap->provenance.stale);
    const auto r = evaluate(s, params_);
    return api_ok(scenario_result_json(r, s));
  }

  static std::optional<std::string> find(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    return it->second;
  }

  static std::optional<Date> optional_date(const QueryParams& q, const std::string& key) {
    auto v = find(q, key);
    if (!v) return std::nullopt;
    try {
      return Date::parse(*v);
    } catch (const std::invalid_argument& e) {
      throw InvalidArgument(key, e.what());
    }
  }

  void install_routes() {
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      QueryParams q;
      for (const auto& [k, v] : req.params) q.emplace(k, v);
      const auto out = handle(req.method, req.path, q, req.body);
      res.status = out.status;
      res.set_content(out.body, "application/json");
    };
    server_.Get(R"(/api/v1/.*)", dispatch);
    server_.Post(R"(/api/v1/.*)", dispatch);
    server_.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    if (!config_.cors_origin.empty()) {
      server_.set_post_routing_handler([origin = config_.cors_origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
      });
    }
  }

  std::shared_ptr<PriceStore> store_;
  ModelParams params_;
  HousingStock stock_;
  ApiConfig config_;
  httplib::Server server_;
};

}  // namespace heatcost
