#include "trajanom/geo.hpp"

#include <cmath>
#include <cstdio>

namespace trajanom {

namespace {
constexpr double kEarthRadiusKm = 6371.0088;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}  // namespace

bool is_valid(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
           p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    if (a == b) return 0.0;
    const double lat1 = a.lat * kDegToRad;
    const double lat2 = b.lat * kDegToRad;
    const double dlat = (b.lat - a.lat) * kDegToRad;
    const double dlon = (b.lon - a.lon) * kDegToRad;
    const double sin_dlat = std::sin(dlat / 2.0);
    const double sin_dlon = std::sin(dlon / 2.0);
    const double h = sin_dlat * sin_dlat +
                     std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::string derive_poi_id(const GeoPoint& p) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.5f,%.5f", p.lat, p.lon);
    return std::string(buf);
}

}  // namespace trajanom
