#pragma once

#include <string>

namespace scholartrace::geo {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Latitude/longitude in degrees. Longitude is kept in (-180, 180]; at the
/// poles it is pinned to 0 so that equal positions compare equal.
class GeoPoint {
public:
    GeoPoint() = default;

    /// Throws std::invalid_argument outside lat ∈ [-90, 90], lon ∈ [-180, 180].
    GeoPoint(double lat, double lon);

    double lat() const noexcept { return lat_; }
    double lon() const noexcept { return lon_; }

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
    double lat_ = 0.0;
    double lon_ = 0.0;
};

struct CityLocation {
    std::string country;
    std::string city;
    GeoPoint point;

    friend bool operator==(const CityLocation&, const CityLocation&) = default;
};

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

}  // namespace scholartrace::geo
