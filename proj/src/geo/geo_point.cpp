#include "scholartrace/geo/geo_point.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scholartrace::geo {

GeoPoint::GeoPoint(double lat, double lon) : lat_(lat), lon_(lon) {
    if (!(lat >= -90.0 && lat <= 90.0)) throw std::invalid_argument("latitude out of range");
    if (!(lon >= -180.0 && lon <= 180.0)) throw std::invalid_argument("longitude out of range");
    if (lon_ == -180.0) lon_ = 180.0;
    if (std::abs(lat_) == 90.0) lon_ = 0.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    constexpr double kDeg = std::numbers::pi / 180.0;
    const double lat1 = a.lat() * kDeg;
    const double lat2 = b.lat() * kDeg;
    const double dlat = lat2 - lat1;
    const double dlon = (b.lon() - a.lon()) * kDeg;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = std::clamp(s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2, 0.0, 1.0);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

}  // namespace scholartrace::geo
