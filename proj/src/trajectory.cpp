#include "trajanom/trajectory.hpp"

#include <algorithm>

#include "trajanom/time_util.hpp"

namespace trajanom {

std::size_t TrajectoryDataset::record_count() const {
    std::size_t n = 0;
    for (const auto& [_, traj] : trajectories) n += traj.records.size();
    return n;
}

SplitDataset split_train_test(const TrajectoryDataset& dataset, std::int64_t t_split) {
    SplitDataset out;
    out.t_split = t_split;
    out.train.poi_catalog = dataset.poi_catalog;
    out.train.type_catalog = dataset.type_catalog;
    out.test.poi_catalog = dataset.poi_catalog;
    out.test.type_catalog = dataset.type_catalog;

    for (const auto& [user, traj] : dataset.trajectories) {
        Trajectory train_traj{user, {}};
        Trajectory test_traj{user, {}};
        for (const auto& rec : traj.records) {
            (rec.checkin <= t_split ? train_traj : test_traj).records.push_back(rec);
        }
        if (train_traj.records.empty()) out.cold_start_users.insert(user);
        out.train.trajectories.emplace(user, std::move(train_traj));
        out.test.trajectories.emplace(user, std::move(test_traj));
    }
    return out;
}

std::vector<VisitFeatures> derive_features(const Trajectory& trajectory) {
    std::vector<VisitFeatures> out;
    out.reserve(trajectory.records.size());
    for (std::size_t i = 0; i < trajectory.records.size(); ++i) {
        const auto& rec = trajectory.records[i];
        VisitFeatures f;
        f.hour = hour_of_day(rec.checkin);
        f.day_of_week = day_of_week(rec.checkin);
        f.travel_km =
            i == 0 ? 0.0 : haversine_km(trajectory.records[i - 1].location, rec.location);
        f.stay_minutes = static_cast<double>(rec.leave - rec.checkin) / 60.0;
        out.push_back(f);
    }
    return out;
}

void finalize_dataset(TrajectoryDataset& dataset) {
    dataset.poi_catalog.clear();
    dataset.type_catalog.clear();
    for (auto& [user, traj] : dataset.trajectories) {
        std::stable_sort(traj.records.begin(), traj.records.end(),
                         [](const StaypointRecord& a, const StaypointRecord& b) {
                             if (a.checkin != b.checkin) return a.checkin < b.checkin;
                             if (a.leave != b.leave) return a.leave < b.leave;
                             return a.poi_id < b.poi_id;
                         });
        for (auto& rec : traj.records) {
            if (rec.poi_id.empty()) rec.poi_id = derive_poi_id(rec.location);
            if (rec.venue_type.empty()) rec.venue_type = kUnknownVenueType;
            dataset.poi_catalog.try_emplace(rec.poi_id,
                                            PoiInfo{rec.location, rec.venue_type});
            dataset.type_catalog.insert(rec.venue_type);
        }
    }
}

}  // namespace trajanom
