#ifndef TRAJANOM_PARSE_HPP
#define TRAJANOM_PARSE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "trajanom/trajectory.hpp"

namespace trajanom {

/// Column-name mapping for delimiter-separated trajectory files. Header names
/// are matched case-insensitively. PoiId is optional in the input; when the
/// column is absent the id is derived from rounded coordinates.
struct ColumnSchema {
    char delimiter = ',';
    std::string user_id = "UserId";
    std::string latitude = "Latitude";
    std::string longitude = "Longitude";
    std::string checkin = "CheckinTime";
    std::string leave = "LeavingTime";
    std::string venue_type = "VenueType";
    std::string poi_id = "PoiId";
};

struct ParseStats {
    std::size_t rows_total = 0;
    std::size_t rows_skipped = 0;
    std::vector<std::string> skip_reasons;  // capped sample of row errors
};

struct ParseResult {
    TrajectoryDataset dataset;
    ParseStats stats;
};

/// Parses a header-bearing delimited stream into a dataset. Records are
/// grouped per user and sorted by checkin. Malformed rows (bad coordinates,
/// bad timestamps, leave < checkin, wrong field count) are skipped and
/// counted. A missing required column throws std::runtime_error.
ParseResult parse_dataset(std::istream& source, const ColumnSchema& schema = {});

ParseResult parse_dataset_file(const std::string& path, const ColumnSchema& schema = {});

/// Canonical serialization: header plus one row per record, users in key
/// order. parse(serialize(d)) == d for well-formed datasets.
void serialize_dataset(const TrajectoryDataset& dataset, std::ostream& out,
                       const ColumnSchema& schema = {});

void serialize_dataset_file(const TrajectoryDataset& dataset, const std::string& path,
                            const ColumnSchema& schema = {});

}  // namespace trajanom

#endif
