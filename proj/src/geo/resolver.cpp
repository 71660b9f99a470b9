#include "scholartrace/geo/resolver.hpp"

#include <fstream>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

#include "scholartrace/common/csv.hpp"
#include "scholartrace/ingest/access_event.hpp"

namespace scholartrace::geo {

FixtureResolver FixtureResolver::from_csv(std::istream& in) {
    const auto rows = read_csv(in);
    if (rows.empty() || rows.front() != std::vector<std::string>{"ip", "country", "city", "lat", "lon"}) {
        throw std::runtime_error("geo fixture: header must be ip,country,city,lat,lon");
    }
    FixtureResolver resolver;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 5 || row[2].empty()) {
            throw std::runtime_error("geo fixture: malformed row " + std::to_string(i + 1));
        }
        try {
            resolver.add(row[0], CityLocation{row[1], row[2], GeoPoint{std::stod(row[3]), std::stod(row[4])}});
        } catch (const std::logic_error&) {
            throw std::runtime_error("geo fixture: bad coordinates on row " + std::to_string(i + 1));
        }
    }
    return resolver;
}

FixtureResolver FixtureResolver::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open geo fixture " + path.string());
    return from_csv(in);
}

void FixtureResolver::add(std::string ip, CityLocation location) {
    table_.insert_or_assign(std::move(ip), std::move(location));
}

std::optional<CityLocation> FixtureResolver::lookup(const std::string& ip) {
    const auto it = table_.find(ip);
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

std::optional<CityLocation> CachingResolver::resolve(const std::string& ip) {
    {
        std::shared_lock lock(mutex_);
        if (const auto it = cache_.find(ip); it != cache_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (const auto it = cache_.find(ip); it != cache_.end()) return it->second;
    ++upstream_calls_;
    auto result = upstream_.lookup(ip);
    cache_.emplace(ip, result);
    return result;
}

std::optional<CityLocation> resolve_ip(const std::string& ip, CachingResolver& resolver) {
    if (!ingest::is_valid_ip(ip)) throw std::invalid_argument("not an IP address: " + ip);
    return resolver.resolve(ip);
}

std::unique_ptr<IpResolver> make_resolver(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open resolver config " + config_path.string());
    const auto doc = nlohmann::json::parse(in);

    if (doc.value("network_enabled", false)) {
        const auto& http = doc.at("http");
        const auto endpoint = [](const nlohmann::json& j) {
            HttpEndpoint e;
            e.base_url = j.at("base_url").get<std::string>();
            e.path = j.at("path").get<std::string>();
            e.query_param = j.at("query_param").get<std::string>();
            e.api_key = j.value("api_key", "");
            e.key_param = j.value("key_param", "key");
            return e;
        };
        HttpResolver::Config config;
        config.ip_locator = endpoint(http.at("ip_locator"));
        config.geocoder = endpoint(http.at("geocoder"));
        config.country_pointer = http.value("country_pointer", config.country_pointer);
        config.city_pointer = http.value("city_pointer", config.city_pointer);
        config.lat_pointer = http.value("lat_pointer", config.lat_pointer);
        config.lon_pointer = http.value("lon_pointer", config.lon_pointer);
        config.timeout_seconds = http.value("timeout_seconds", config.timeout_seconds);
        return std::make_unique<HttpResolver>(std::move(config));
    }

    std::filesystem::path fixture = doc.at("fixture").get<std::string>();
    if (fixture.is_relative()) fixture = config_path.parent_path() / fixture;
    return std::make_unique<FixtureResolver>(FixtureResolver::from_file(fixture));
}

}  // namespace scholartrace::geo
