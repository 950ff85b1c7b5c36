#pragma once

#include "heatcost/error.hpp"
#include "heatcost/price_store.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

namespace heatcost {

enum class SourceKind { http, file, fixture };

inline SourceKind parse_source_kind(std::string_view name) {
  if (name == "http") return SourceKind::http;
  if (name == "file") return SourceKind::file;
  if (name == "fixture") return SourceKind::fixture;
  throw InvalidArgument("feed_kind", "unknown source kind '" + std::string(name) + "'");
}

inline std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::http: return "http";
    case SourceKind::file: return "file";
    case SourceKind::fixture: return "fixture";
  }
  return "unknown";
}

struct FeedSource {
  SourceKind kind = SourceKind::fixture;
  std::string location;
  FeedFormat format = FeedFormat::csv;
  std::chrono::seconds cache_ttl{3600};

  void check() const {
    if (cache_ttl.count() < 0) throw InvalidArgument("feed_cache_ttl", "must be >= 0");
    if (location.empty()) throw InvalidArgument("feed_location", "must not be empty");
    if (kind == SourceKind::http && location.rfind("http://", 0) != 0 && location.rfind("https://", 0) != 0)
      throw InvalidArgument("feed_location", "http sources need an absolute URL, got '" + location + "'");
  }
};

struct TransportResponse {
  int status = 0;
  std::string body;
};

/// Network access for http sources. Throws FetchError when the host cannot be reached.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportResponse get(const std::string& url) = 0;
};

/// Plain-HTTP transport backed by cpp-httplib.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds{10}) : timeout_(timeout) {}

  TransportResponse get(const std::string& url) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw FetchError("unreachable: bad URL " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    auto res = client.Get(path);
    if (!res) throw FetchError("unreachable: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  std::chrono::seconds timeout_;
};

struct FetchResult {
  std::string body;
  std::chrono::system_clock::time_point fetched_at{};
  std::string origin;  // "fixture", "file", "http" or "cache"
  bool stale = false;
};

inline std::string format_rfc3339(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::chrono::system_clock::time_point parse_rfc3339(const std::string& text) {
  std::tm tm{};
  std::istringstream is(text);
  is >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  if (is.fail()) throw Error("bad RFC 3339 timestamp '" + text + "'");
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

/// FNV-1a over "kind\nlocation"; stable across runs and platforms.
inline std::string cache_key(const FeedSource& source) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : to_string(source.kind) + "\n" + source.location) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Retrieves raw feed text.
///
/// http sources go through an on-disk cache (`<key>.body` plus a `<key>.meta`
/// JSON sidecar). A cache entry younger than the ttl is served without a
/// request; if the upstream fails, an expired entry is served with
/// `stale = true`. file and fixture sources are read directly and never touch
/// the network.
class Fetcher {
 public:
  Fetcher(std::filesystem::path cache_dir, std::shared_ptr<Transport> transport)
      : cache_dir_(std::move(cache_dir)), transport_(std::move(transport)) {}

  FetchResult fetch(const FeedSource& source, std::chrono::system_clock::time_point now) {
    source.check();
    if (source.kind != SourceKind::http) return read_local(source, now);

    const auto key = cache_key(source);
    std::lock_guard lock(mutex_for(key));
    auto cached = read_cache(key);
    if (cached && now - cached->fetched_at < source.cache_ttl) {
      cached->origin = "cache";
      return *cached;
    }

    std::string failure;
    try {
      if (!transport_) throw FetchError("unreachable: no transport configured");
      auto res = transport_->get(source.location);
      if (res.status >= 200 && res.status < 300) {
        FetchResult fresh{std::move(res.body), now, "http", false};
        write_cache(key, source, fresh);
        return fresh;
      }
      failure = "unreachable: status " + std::to_string(res.status);
    } catch (const FetchError& e) {
      failure = e.what();
    }
    if (cached) {
      cached->origin = "cache";
      cached->stale = true;
      return *cached;
    }
    throw FetchError(failure);
  }

  const std::filesystem::path& cache_dir() const noexcept { return cache_dir_; }

 private:
  static FetchResult read_local(const FeedSource& source, std::chrono::system_clock::time_point now) {
    std::ifstream in(source.location, std::ios::binary);
    if (!in) throw FetchError("cannot open " + source.location);
    std::stringstream buf;
    buf << in.rdbuf();
    return FetchResult{buf.str(), now, to_string(source.kind), false};
  }

  std::optional<FetchResult> read_cache(const std::string& key) const {
    const auto body_path = cache_dir_ / (key + ".body");
    const auto meta_path = cache_dir_ / (key + ".meta");
    if (!std::filesystem::exists(body_path) || !std::filesystem::exists(meta_path)) return std::nullopt;
    try {
      std::ifstream meta_in(meta_path);
      const auto meta = nlohmann::json::parse(meta_in);
      std::ifstream body_in(body_path, std::ios::binary);
      std::stringstream buf;
      buf << body_in.rdbuf();
      return FetchResult{buf.str(), parse_rfc3339(meta.at("fetched_at").get<std::string>()), "cache", false};
    } catch (const std::exception&) {
      return std::nullopt;  // unreadable entry counts as a miss
    }
  }

  void write_cache(const std::string& key, const FeedSource& source, const FetchResult& r) const {
    std::filesystem::create_directories(cache_dir_);
    nlohmann::ordered_json meta;
    meta["fetched_at"] = format_rfc3339(r.fetched_at);
    meta["kind"] = to_string(source.kind);
    meta["location"] = source.location;
    meta["format"] = to_string(source.format);
    // Metadata goes last so an interrupted write never stamps an old body as fresh.
    atomic_write(cache_dir_ / (key + ".body"), r.body);
    atomic_write(cache_dir_ / (key + ".meta"), meta.dump(2) + "\n");
  }

  static void atomic_write(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      if (!out) throw Error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

  std::mutex& mutex_for(const std::string& key) {
    std::lock_guard lock(map_mutex_);
    return per_key_[key];
  }

  std::filesystem::path cache_dir_;
  std::shared_ptr<Transport> transport_;
  std::mutex map_mutex_;
  std::map<std::string, std::mutex> per_key_;
};

}  // namespace heatcost
