#include "trajanom/extract.hpp"

#include <stdexcept>

namespace trajanom {

std::vector<StaypointRecord> extract_staypoints(std::span<const GpsFix> fixes,
                                                double dist_threshold_m,
                                                double time_threshold_s,
                                                const std::string& user_id) {
    if (dist_threshold_m <= 0.0 || time_threshold_s <= 0.0) {
        throw std::invalid_argument("extract_staypoints: thresholds must be positive");
    }
    for (std::size_t i = 1; i < fixes.size(); ++i) {
        if (fixes[i].timestamp < fixes[i - 1].timestamp) {
            throw std::invalid_argument("extract_staypoints: fixes not sorted by time");
        }
    }

    std::vector<StaypointRecord> out;
    std::size_t i = 0;
    while (i < fixes.size()) {
        // Grow the run anchored at fixes[i] until a fix leaves the radius.
        std::size_t j = i;
        while (j + 1 < fixes.size() &&
               haversine_km(fixes[i].location, fixes[j + 1].location) * 1000.0 <=
                   dist_threshold_m) {
            ++j;
        }
        const double span_s =
            static_cast<double>(fixes[j].timestamp - fixes[i].timestamp);
        if (span_s >= time_threshold_s) {
            GeoPoint mean{0.0, 0.0};
            for (std::size_t m = i; m <= j; ++m) {
                mean.lat += fixes[m].location.lat;
                mean.lon += fixes[m].location.lon;
            }
            const double n = static_cast<double>(j - i + 1);
            mean.lat /= n;
            mean.lon /= n;

            StaypointRecord rec;
            rec.user_id = user_id;
            rec.location = mean;
            rec.checkin = fixes[i].timestamp;
            rec.leave = fixes[j].timestamp;
            rec.venue_type = kUnknownVenueType;
            rec.poi_id = derive_poi_id(mean);
            out.push_back(std::move(rec));
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace trajanom
