#ifndef TRAJANOM_GEO_HPP
#define TRAJANOM_GEO_HPP

#include <string>

namespace trajanom {

/// WGS-84 style coordinate in degrees. NaN is never valid.
struct GeoPoint {
    double lat = 0.0;  // [-90, 90]
    double lon = 0.0;  // [-180, 180]

    bool operator==(const GeoPoint& o) const { return lat == o.lat && lon == o.lon; }
};

bool is_valid(const GeoPoint& p);

/// Great-circle distance in kilometers (haversine, mean Earth radius
/// 6371.0088 km). Symmetric, non-negative, zero iff the points coincide.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

/// Stable POI identity for records that do not carry one: coordinates rounded
/// to 5 decimal places (~1 m) and joined into a key.
std::string derive_poi_id(const GeoPoint& p);

}  // namespace trajanom

#endif
