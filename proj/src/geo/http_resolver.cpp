#include <httplib.h>

#include <json.hpp>

#include "scholartrace/geo/resolver.hpp"

namespace scholartrace::geo {

namespace {

std::optional<nlohmann::json> get_json(const HttpEndpoint& endpoint, const std::string& value,
                                       int timeout_seconds) {
    httplib::Client client(endpoint.base_url);
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
    httplib::Params params{{endpoint.query_param, value}};
    if (!endpoint.api_key.empty()) params.emplace(endpoint.key_param, endpoint.api_key);
    const auto res = client.Get(endpoint.path, params, httplib::Headers{});
    if (!res || res->status != 200) return std::nullopt;
    auto doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) return std::nullopt;
    return doc;
}

std::optional<nlohmann::json> at_pointer(const nlohmann::json& doc, const std::string& pointer) {
    const nlohmann::json::json_pointer ptr(pointer);
    if (!doc.contains(ptr)) return std::nullopt;
    return doc.at(ptr);
}

std::optional<double> as_number(const std::optional<nlohmann::json>& value) {
    if (!value) return std::nullopt;
    if (value->is_number()) return value->get<double>();
    if (value->is_string()) {
        try {
            return std::stod(value->get<std::string>());
        } catch (const std::logic_error&) {
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<CityLocation> HttpResolver::lookup(const std::string& ip) {
    const auto located = get_json(config_.ip_locator, ip, config_.timeout_seconds);
    if (!located) return std::nullopt;
    const auto country = at_pointer(*located, config_.country_pointer);
    const auto city = at_pointer(*located, config_.city_pointer);
    if (!country || !city || !country->is_string() || !city->is_string()) return std::nullopt;
    const auto city_name = city->get<std::string>();
    const auto country_name = country->get<std::string>();
    if (city_name.empty()) return std::nullopt;

    const auto geocoded = get_json(config_.geocoder, city_name + ", " + country_name, config_.timeout_seconds);
    if (!geocoded) return std::nullopt;
    const auto lat = as_number(at_pointer(*geocoded, config_.lat_pointer));
    const auto lon = as_number(at_pointer(*geocoded, config_.lon_pointer));
    if (!lat || !lon) return std::nullopt;
    try {
        return CityLocation{country_name, city_name, GeoPoint{*lat, *lon}};
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

}  // namespace scholartrace::geo
