#include "trajanom/visit_matrix.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace trajanom {

const char* to_string(MatrixMode mode) {
    return mode == MatrixMode::binary ? "binary" : "count";
}

MatrixMode matrix_mode_from_string(const std::string& s) {
    if (s == "binary") return MatrixMode::binary;
    if (s == "count") return MatrixMode::count;
    throw std::invalid_argument("unknown matrix mode: " + s);
}

double VisitMatrix::at(int row, int col) const {
    const auto& r = rows.at(static_cast<std::size_t>(row));
    auto it = r.find(col);
    return it == r.end() ? 0.0 : it->second;
}

std::size_t VisitMatrix::nonzero_count() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.size();
    return n;
}

VisitMatrix build_matrix(const TrajectoryDataset& dataset, MatrixMode mode) {
    VisitMatrix m;
    m.mode = mode;
    for (const auto& [user, _] : dataset.trajectories) {
        m.user_index.emplace(user, static_cast<int>(m.user_ids.size()));
        m.user_ids.push_back(user);
    }
    for (const auto& [poi, info] : dataset.poi_catalog) {
        m.poi_index.emplace(poi, static_cast<int>(m.poi_ids.size()));
        m.poi_ids.push_back(poi);
        m.type_of_column.push_back(info.venue_type);
    }
    m.rows.resize(m.user_ids.size());

    for (const auto& [user, traj] : dataset.trajectories) {
        const int row = m.user_index.at(user);
        for (const auto& rec : traj.records) {
            auto poi_it = m.poi_index.find(rec.poi_id);
            if (poi_it == m.poi_index.end()) {
                throw std::runtime_error("record references poi not in catalog: " +
                                         rec.poi_id);
            }
            double& cell = m.rows[row][poi_it->second];
            if (mode == MatrixMode::binary) {
                cell = 1.0;
            } else {
                cell += 1.0;
            }
        }
    }
    return m;
}

std::map<std::string, long> poi_type_histogram(const TrajectoryDataset& train,
                                               const std::string& user) {
    auto it = train.trajectories.find(user);
    if (it == train.trajectories.end()) {
        throw std::invalid_argument("poi_type_histogram: unknown user " + user);
    }
    std::map<std::string, long> hist;
    for (const auto& rec : it->second.records) hist[rec.venue_type] += 1;
    return hist;
}

std::map<std::string, long> poi_type_histogram(const VisitMatrix& count_matrix,
                                               const std::string& user) {
    if (count_matrix.mode != MatrixMode::count) {
        throw std::invalid_argument("poi_type_histogram: matrix must be count mode");
    }
    auto it = count_matrix.user_index.find(user);
    if (it == count_matrix.user_index.end()) {
        throw std::invalid_argument("poi_type_histogram: unknown user " + user);
    }
    std::map<std::string, long> hist;
    for (const auto& [col, value] : count_matrix.rows[it->second]) {
        hist[count_matrix.type_of_column[col]] += static_cast<long>(value);
    }
    return hist;
}

void export_matrix(const VisitMatrix& m, const std::string& values_path,
                   const std::string& sidecar_path) {
    std::ofstream values(values_path);
    if (!values) throw std::runtime_error("cannot write " + values_path);
    for (std::size_t row = 0; row < m.rows.size(); ++row) {
        for (const auto& [col, value] : m.rows[row]) {
            values << row << ' ' << col << ' ' << value << "\n";
        }
    }

    nlohmann::json sidecar;
    sidecar["mode"] = to_string(m.mode);
    sidecar["users"] = m.user_ids;
    sidecar["pois"] = m.poi_ids;
    sidecar["types"] = m.type_of_column;
    std::ofstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot write " + sidecar_path);
    side << sidecar.dump(2) << "\n";
}

VisitMatrix import_matrix(const std::string& values_path,
                          const std::string& sidecar_path) {
    std::ifstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot open " + sidecar_path);
    nlohmann::json sidecar = nlohmann::json::parse(side);

    VisitMatrix m;
    m.mode = matrix_mode_from_string(sidecar.at("mode").get<std::string>());
    m.user_ids = sidecar.at("users").get<std::vector<std::string>>();
    m.poi_ids = sidecar.at("pois").get<std::vector<std::string>>();
    m.type_of_column = sidecar.at("types").get<std::vector<std::string>>();
    if (m.type_of_column.size() != m.poi_ids.size()) {
        throw std::runtime_error("matrix sidecar: types/pois length mismatch");
    }
    for (std::size_t i = 0; i < m.user_ids.size(); ++i) {
        m.user_index.emplace(m.user_ids[i], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < m.poi_ids.size(); ++i) {
        m.poi_index.emplace(m.poi_ids[i], static_cast<int>(i));
    }
    m.rows.resize(m.user_ids.size());

    std::ifstream values(values_path);
    if (!values) throw std::runtime_error("cannot open " + values_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(values, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        int row = -1, col = -1;
        double value = 0.0;
        if (!(ss >> row >> col >> value) || row < 0 || row >= m.n_users() || col < 0 ||
            col >= m.n_pois()) {
            throw std::runtime_error("bad matrix entry at " + values_path + ":" +
                                     std::to_string(line_no));
        }
        m.rows[row][col] = value;
    }
    return m;
}

}  // namespace trajanom
