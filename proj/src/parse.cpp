#include "trajanom/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "trajanom/time_util.hpp"

namespace trajanom {

namespace {

constexpr std::size_t kMaxReportedSkips = 20;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

ParseResult parse_dataset(std::istream& source, const ColumnSchema& schema) {
    std::string line;
    if (!std::getline(source, line)) {
        throw std::runtime_error("parse_dataset: empty input, expected a header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_line(line, schema.delimiter);
    auto find_col = [&](const std::string& name) -> int {
        const std::string want = lower(name);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (lower(header[i]) == want) return static_cast<int>(i);
        }
        return -1;
    };

    const int c_user = find_col(schema.user_id);
    const int c_lat = find_col(schema.latitude);
    const int c_lon = find_col(schema.longitude);
    const int c_in = find_col(schema.checkin);
    const int c_out = find_col(schema.leave);
    const int c_type = find_col(schema.venue_type);
    const int c_poi = find_col(schema.poi_id);  // optional

    for (const auto& [col, name] :
         {std::pair{c_user, schema.user_id}, {c_lat, schema.latitude},
          {c_lon, schema.longitude}, {c_in, schema.checkin}, {c_out, schema.leave},
          {c_type, schema.venue_type}}) {
        if (col < 0) {
            throw std::runtime_error("parse_dataset: missing required column '" + name +
                                     "'");
        }
    }
    const std::size_t min_fields = static_cast<std::size_t>(
        std::max({c_user, c_lat, c_lon, c_in, c_out, c_type, c_poi}) + 1);

    ParseResult result;
    std::size_t line_no = 1;
    auto skip = [&](const std::string& reason) {
        ++result.stats.rows_skipped;
        if (result.stats.skip_reasons.size() < kMaxReportedSkips) {
            result.stats.skip_reasons.push_back("line " + std::to_string(line_no) + ": " +
                                                reason);
        }
    };

    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++result.stats.rows_total;

        const auto fields = split_line(line, schema.delimiter);
        if (fields.size() < min_fields) {
            skip("expected at least " + std::to_string(min_fields) + " fields, got " +
                 std::to_string(fields.size()));
            continue;
        }

        StaypointRecord rec;
        rec.user_id = fields[c_user];
        if (rec.user_id.empty()) {
            skip("empty user id");
            continue;
        }
        if (!parse_double(fields[c_lat], rec.location.lat) ||
            !parse_double(fields[c_lon], rec.location.lon) || !is_valid(rec.location)) {
            skip("bad coordinates '" + fields[c_lat] + "," + fields[c_lon] + "'");
            continue;
        }
        const auto t_in = parse_iso8601(fields[c_in]);
        const auto t_out = parse_iso8601(fields[c_out]);
        if (!t_in || !t_out) {
            skip("unparseable timestamp");
            continue;
        }
        if (*t_out < *t_in) {
            skip("leave before checkin");
            continue;
        }
        rec.checkin = *t_in;
        rec.leave = *t_out;
        rec.venue_type = fields[c_type].empty() ? kUnknownVenueType : fields[c_type];
        if (c_poi >= 0 && !fields[c_poi].empty()) {
            rec.poi_id = fields[c_poi];
        } else {
            rec.poi_id = derive_poi_id(rec.location);
        }

        auto [it, _] = result.dataset.trajectories.try_emplace(rec.user_id,
                                                               Trajectory{rec.user_id, {}});
        it->second.records.push_back(std::move(rec));
    }

    finalize_dataset(result.dataset);
    return result;
}

ParseResult parse_dataset_file(const std::string& path, const ColumnSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    return parse_dataset(in, schema);
}

void serialize_dataset(const TrajectoryDataset& dataset, std::ostream& out,
                       const ColumnSchema& schema) {
    const char d = schema.delimiter;
    out << schema.user_id << d << schema.latitude << d << schema.longitude << d
        << schema.checkin << d << schema.leave << d << schema.venue_type << d
        << schema.poi_id << "\n";
    for (const auto& [user, traj] : dataset.trajectories) {
        for (const auto& rec : traj.records) {
            out << rec.user_id << d << format_double(rec.location.lat) << d
                << format_double(rec.location.lon) << d << format_iso8601(rec.checkin)
                << d << format_iso8601(rec.leave) << d << rec.venue_type << d
                << rec.poi_id << "\n";
        }
    }
}

void serialize_dataset_file(const TrajectoryDataset& dataset, const std::string& path,
                            const ColumnSchema& schema) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    serialize_dataset(dataset, out, schema);
}

}  // namespace trajanom
