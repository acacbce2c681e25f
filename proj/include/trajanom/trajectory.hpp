#ifndef TRAJANOM_TRAJECTORY_HPP
#define TRAJANOM_TRAJECTORY_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "trajanom/geo.hpp"

namespace trajanom {

/// The designated label for venues whose type is not known.
inline constexpr const char* kUnknownVenueType = "Unknown";

/// One check-in: a user stayed at a place from `checkin` to `leave`.
struct StaypointRecord {
    std::string user_id;
    GeoPoint location;
    std::int64_t checkin = 0;  // UTC unix seconds
    std::int64_t leave = 0;    // UTC unix seconds, >= checkin
    std::string venue_type;
    std::string poi_id;

    bool operator==(const StaypointRecord&) const = default;
};

/// A user's chronologically ordered staypoints (non-decreasing checkin).
struct Trajectory {
    std::string user_id;
    std::vector<StaypointRecord> records;

    bool operator==(const Trajectory&) const = default;
};

struct PoiInfo {
    GeoPoint location;
    std::string venue_type;

    bool operator==(const PoiInfo&) const = default;
};

/// All users' trajectories plus the POI and venue-type catalogs. Immutable
/// after construction; safe to share across threads.
struct TrajectoryDataset {
    std::map<std::string, Trajectory> trajectories;  // keyed by user_id
    std::map<std::string, PoiInfo> poi_catalog;      // keyed by poi_id
    std::set<std::string> type_catalog;

    std::size_t record_count() const;

    bool operator==(const TrajectoryDataset&) const = default;
};

/// Temporal train/test partition at t_split: records with
/// checkin <= t_split are train, the rest test. Both halves keep the full
/// user set and catalogs so downstream index spaces line up.
struct SplitDataset {
    TrajectoryDataset train;
    TrajectoryDataset test;
    std::int64_t t_split = 0;
    std::set<std::string> cold_start_users;  // users with zero train records
};

SplitDataset split_train_test(const TrajectoryDataset& dataset, std::int64_t t_split);

/// Per-visit derived features, aligned with a trajectory's records.
struct VisitFeatures {
    int hour = 0;         // [0, 23]
    int day_of_week = 0;  // Monday = 0
    double travel_km = 0.0;
    double stay_minutes = 0.0;
};

/// Features for each record of a sorted trajectory. travel_km of the first
/// record is 0; times are interpreted as UTC.
std::vector<VisitFeatures> derive_features(const Trajectory& trajectory);

/// Sorts records in place by (checkin, leave, poi_id) and rebuilds catalogs
/// from the records. Used by ingestion and the generator.
void finalize_dataset(TrajectoryDataset& dataset);

}  // namespace trajanom

#endif
