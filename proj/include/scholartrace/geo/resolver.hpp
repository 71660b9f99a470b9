#pragma once

#include <atomic>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "scholartrace/geo/geo_point.hpp"

namespace scholartrace::geo {

/// Source of IP → city-level locations. nullopt means unresolved.
class IpResolver {
public:
    virtual ~IpResolver() = default;
    virtual std::optional<CityLocation> lookup(const std::string& ip) = 0;
};

/// Offline table loaded from CSV with the exact header "ip,country,city,lat,lon".
class FixtureResolver final : public IpResolver {
public:
    FixtureResolver() = default;

    /// Throws std::runtime_error on a wrong header or malformed row.
    static FixtureResolver from_csv(std::istream& in);
    static FixtureResolver from_file(const std::filesystem::path& path);

    void add(std::string ip, CityLocation location);
    std::optional<CityLocation> lookup(const std::string& ip) override;
    std::size_t size() const { return table_.size(); }

private:
    std::unordered_map<std::string, CityLocation> table_;
};

/// Memoizes an upstream resolver by exact IP string, including misses.
/// Concurrent readers share a lock; insertions are serialized.
class CachingResolver {
public:
    explicit CachingResolver(IpResolver& upstream) : upstream_(upstream) {}

    std::optional<CityLocation> resolve(const std::string& ip);
    std::size_t upstream_calls() const { return upstream_calls_.load(); }

private:
    IpResolver& upstream_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::optional<CityLocation>> cache_;
    std::atomic<std::size_t> upstream_calls_{0};
};

/// Throws std::invalid_argument when `ip` is not a syntactically valid address.
std::optional<CityLocation> resolve_ip(const std::string& ip, CachingResolver& resolver);

/// Endpoint of an HTTP lookup service. Requests are
/// GET {base_url}{path}?{query_param}=<value>[&{key_param}={api_key}], answered with JSON.
struct HttpEndpoint {
    std::string base_url;
    std::string path;
    std::string query_param;
    std::string api_key;
    std::string key_param = "key";
};

/// Network-backed resolver: an IP-location service yields country and city,
/// then a geocoding service turns "city, country" into coordinates.
/// Response fields are read with JSON pointers.
class HttpResolver final : public IpResolver {
public:
    struct Config {
        HttpEndpoint ip_locator;
        std::string country_pointer = "/country";
        std::string city_pointer = "/city";
        HttpEndpoint geocoder;
        std::string lat_pointer = "/lat";
        std::string lon_pointer = "/lon";
        int timeout_seconds = 5;
    };

    explicit HttpResolver(Config config) : config_(std::move(config)) {}
    std::optional<CityLocation> lookup(const std::string& ip) override;

private:
    Config config_;
};

/// Resolver configuration document:
///   {"network_enabled": false, "fixture": "geo.csv", "http": {...}}
/// Network use stays off unless "network_enabled" is true.
std::unique_ptr<IpResolver> make_resolver(const std::filesystem::path& config_path);

}  // namespace scholartrace::geo
