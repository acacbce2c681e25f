#ifndef TRAJANOM_EXTRACT_HPP
#define TRAJANOM_EXTRACT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajanom/trajectory.hpp"

namespace trajanom {

struct GpsFix {
    GeoPoint location;
    std::int64_t timestamp = 0;  // UTC unix seconds
};

/// Collapses a time-sorted GPS track into staypoints. A staypoint is a
/// maximal run of consecutive fixes that all lie within dist_threshold_m of
/// the run's first fix and whose timestamps span at least time_threshold_s.
/// The staypoint location is the arithmetic mean of the run's coordinates;
/// checkin/leave are the run's first/last timestamps. Venue types are
/// unknown at this stage.
///
/// Throws std::invalid_argument on unsorted input or non-positive thresholds.
std::vector<StaypointRecord> extract_staypoints(std::span<const GpsFix> fixes,
                                                double dist_threshold_m,
                                                double time_threshold_s,
                                                const std::string& user_id = "");

}  // namespace trajanom

#endif
