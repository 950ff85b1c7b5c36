#pragma once

#include "heatcost/date.hpp"
#include "heatcost/decimal.hpp"
#include "heatcost/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace heatcost {

enum class FeedFormat { csv, json };

inline FeedFormat parse_feed_format(std::string_view name) {
  if (name == "csv") return FeedFormat::csv;
  if (name == "json") return FeedFormat::json;
  throw InvalidArgument("format", "unknown feed format '" + std::string(name) + "'");
}

inline std::string to_string(FeedFormat f) { return f == FeedFormat::csv ? "csv" : "json"; }

/// One spot-market quote, EUR per MWh.
struct PriceQuote {
  Date date;
  Decimal price;

  friend bool operator==(const PriceQuote&, const PriceQuote&) = default;
};

struct PriceSeries {
  std::vector<PriceQuote> quotes;
  std::string source_label;

  bool empty() const noexcept { return quotes.empty(); }
  std::size_t size() const noexcept { return quotes.size(); }
  const PriceQuote& front() const { return quotes.front(); }
  const PriceQuote& back() const { return quotes.back(); }

  // source_label is descriptive; two series are equal when their quotes are.
  friend bool operator==(const PriceSeries& a, const PriceSeries& b) { return a.quotes == b.quotes; }
};

struct PrePostStats {
  Date split_date;
  Decimal pre_mean;
  Decimal post_latest;
  Decimal ratio;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline PriceQuote make_quote(std::size_t row, std::string_view date_text, std::string_view price_text) {
  PriceQuote q;
  try {
    q.date = Date::parse(date_text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(row, e.what());
  }
  try {
    q.price = Decimal::parse(price_text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(row, e.what());
  }
  if (q.price.sign() <= 0) throw ParseError(row, "non-positive price " + std::string(price_text));
  return q;
}

inline PriceSeries parse_csv(std::string_view raw) {
  PriceSeries series;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    auto eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) eol = raw.size();
    const auto line = trim(raw.substr(pos, eol - pos));
    pos = eol + 1;
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError(row, "expected 'YYYY-MM-DD,<price>'");
    auto rest = line.substr(comma + 1);
    // Extra columns (e.g. a rolling mean in figure exports) are ignored.
    const auto second = rest.find(',');
    if (second != std::string_view::npos) rest = rest.substr(0, second);
    series.quotes.push_back(make_quote(row, trim(line.substr(0, comma)), trim(rest)));
  }
  return series;
}

inline PriceSeries parse_json(std::string_view raw) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError(0, "expected a JSON array of quotes");
  PriceSeries series;
  std::size_t row = 0;
  for (const auto& item : doc) {
    ++row;
    if (!item.is_object()) throw ParseError(row, "expected an object");
    const auto d = item.find("date");
    const auto p = item.find("price_eur_mwh");
    if (d == item.end() || !d->is_string()) throw ParseError(row, "missing string field 'date'");
    if (p == item.end() || !p->is_number()) throw ParseError(row, "missing numeric field 'price_eur_mwh'");
    // dump() yields the shortest text that round-trips the parsed double,
    // which recovers the literal for any price with <= 15 significant digits.
    series.quotes.push_back(make_quote(row, d->get<std::string>(), p->dump()));
  }
  return series;
}

}  // namespace detail

/// Parses a canonical feed. Rows are returned in input order, unsorted.
inline PriceSeries parse_price_feed(std::string_view raw, FeedFormat format) {
  if (detail::trim(raw).empty()) throw ParseError(0, "empty input");
  return format == FeedFormat::csv ? detail::parse_csv(raw) : detail::parse_json(raw);
}

inline PriceSeries parse_price_feed(std::string_view raw, std::string_view format) {
  return parse_price_feed(raw, parse_feed_format(format));
}

/// Sorts by date and rejects duplicates and empty series. Idempotent.
inline PriceSeries validate_series(PriceSeries series) {
  if (series.quotes.empty()) throw ValidationError("empty series");
  std::stable_sort(series.quotes.begin(), series.quotes.end(),
                   [](const PriceQuote& a, const PriceQuote& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < series.quotes.size(); ++i) {
    if (series.quotes[i].date == series.quotes[i - 1].date)
      throw ValidationError("duplicate date " + series.quotes[i].date.to_string());
  }
  for (const auto& q : series.quotes) {
    if (q.price.sign() <= 0) throw ValidationError("non-positive price on " + q.date.to_string());
  }
  return series;
}

inline PrePostStats price_stats(const PriceSeries& series, Date split_date) {
  Decimal sum = 0;
  std::int64_t pre_count = 0;
  std::optional<Decimal> latest;
  for (const auto& q : series.quotes) {
    if (q.date < split_date) {
      sum += q.price;
      ++pre_count;
    } else {
      latest = q.price;
    }
  }
  if (pre_count == 0) throw NoDataError("no quotes before " + split_date.to_string());
  if (!latest) throw NoDataError("no quotes on or after " + split_date.to_string());
  PrePostStats stats;
  stats.split_date = split_date;
  stats.pre_mean = sum / Decimal(pre_count);
  stats.post_latest = *latest;
  stats.ratio = stats.post_latest / stats.pre_mean;
  return stats;
}

/// Last observation carried forward: price of the latest quote dated <= as_of.
inline Decimal latest_price(const PriceSeries& series, Date as_of) {
  const auto it = std::upper_bound(series.quotes.begin(), series.quotes.end(), as_of,
                                   [](const Date& d, const PriceQuote& q) { return d < q.date; });
  if (it == series.quotes.begin()) throw NoDataError("no quote at or before " + as_of.to_string());
  return std::prev(it)->price;
}

/// Quotes with from <= date <= to; either bound may be omitted.
inline PriceSeries slice(const PriceSeries& series, std::optional<Date> from, std::optional<Date> to) {
  PriceSeries out;
  out.source_label = series.source_label;
  for (const auto& q : series.quotes) {
    if (from && q.date < *from) continue;
    if (to && q.date > *to) continue;
    out.quotes.push_back(q);
  }
  return out;
}

/// Mean of the quotes dated within the trailing `window_days` calendar days
/// (inclusive of each quote's own date). One value per quote.
inline std::vector<Decimal> rolling_mean(const PriceSeries& series, int window_days) {
  if (window_days < 1) throw InvalidArgument("window", "must be at least 1 day");
  std::vector<Decimal> out;
  out.reserve(series.quotes.size());
  std::size_t lo = 0;
  Decimal sum = 0;
  for (std::size_t hi = 0; hi < series.quotes.size(); ++hi) {
    sum += series.quotes[hi].price;
    const Date earliest = series.quotes[hi].date.plus_days(-(window_days - 1));
    while (series.quotes[lo].date < earliest) sum -= series.quotes[lo++].price;
    out.push_back(sum / Decimal(static_cast<std::int64_t>(hi - lo + 1)));
  }
  return out;
}

inline std::string export_series(const PriceSeries& series, FeedFormat format) {
  if (series.quotes.empty()) throw ValidationError("empty series");
  std::ostringstream os;
  if (format == FeedFormat::csv) {
    for (const auto& q : series.quotes) os << q.date.to_string() << ',' << q.price.to_string() << '\n';
  } else {
    os << "[\n";
    for (std::size_t i = 0; i < series.quotes.size(); ++i) {
      const auto& q = series.quotes[i];
      os << "  {\"date\": \"" << q.date.to_string() << "\", \"price_eur_mwh\": " << q.price.to_string() << '}'
         << (i + 1 < series.quotes.size() ? ",\n" : "\n");
    }
    os << "]\n";
  }
  return os.str();
}

/// Where the current price snapshot came from.
struct Provenance {
  std::string origin;  // "fixture", "file", "http", "store"
  std::chrono::system_clock::time_point fetched_at{};
  bool stale = false;
};

/// A validated series plus its provenance. Immutable once published.
struct Snapshot {
  PriceSeries series;
  Provenance provenance;
};

/// Persistent price store.
///
/// The backing file holds canonical CSV lines. New quotes that extend the
/// series are appended; anything else (back-fill or corrected prices) rewrites
/// the file atomically. Readers take an immutable snapshot; writers are
/// serialized.
class PriceStore {
 public:
  PriceStore() = default;
  explicit PriceStore(std::filesystem::path path) : path_(std::move(path)) {}

  /// Loads the backing file if it exists. Returns the number of quotes.
  std::size_t load() {
    std::lock_guard lock(write_mutex_);
    if (path_.empty() || !std::filesystem::exists(path_)) return 0;
    std::ifstream in(path_, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    if (detail::trim(buf.str()).empty()) return 0;
    auto series = validate_series(parse_price_feed(buf.str(), FeedFormat::csv));
    series.source_label = path_.string();
    const auto n = series.size();
    publish(std::move(series), Provenance{"store", std::chrono::system_clock::now(), false});
    return n;
  }

  /// Merges validated quotes into the store. A quote for an existing date
  /// replaces the stored price.
  void ingest(const PriceSeries& incoming, Provenance provenance) {
    auto fresh = validate_series(incoming);
    std::lock_guard lock(write_mutex_);
    const auto current = snapshot();
    PriceSeries merged;
    merged.source_label = fresh.source_label;
    bool append_only = true;
    if (current) {
      merged.quotes = current->series.quotes;
      if (!merged.quotes.empty() && fresh.front().date <= merged.back().date) append_only = false;
    }
    for (const auto& q : fresh.quotes) {
      auto it = std::lower_bound(merged.quotes.begin(), merged.quotes.end(), q.date,
                                 [](const PriceQuote& e, const Date& d) { return e.date < d; });
      if (it != merged.quotes.end() && it->date == q.date)
        it->price = q.price;
      else
        merged.quotes.insert(it, q);
    }
    if (!path_.empty()) {
      if (append_only && current)
        append_lines(fresh);
      else
        rewrite(merged);
    }
    publish(std::move(merged), std::move(provenance));
  }

  /// Current snapshot, or nullptr when nothing has been loaded.
  std::shared_ptr<const Snapshot> snapshot() const { return std::atomic_load(&snapshot_); }

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void publish(PriceSeries series, Provenance provenance) {
    auto next = std::make_shared<const Snapshot>(Snapshot{std::move(series), std::move(provenance)});
    std::atomic_store(&snapshot_, std::shared_ptr<const Snapshot>(std::move(next)));
  }

  void append_lines(const PriceSeries& s) {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out << export_series(s, FeedFormat::csv);
    if (!out) throw Error("cannot append to " + path_.string());
  }

  void rewrite(const PriceSeries& s) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    auto tmp = path_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << export_series(s, FeedFormat::csv);
      if (!out) throw Error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path_);
  }

  std::filesystem::path path_;
  std::mutex write_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

}  // namespace heatcost
