#ifndef TRAJANOM_VISIT_MATRIX_HPP
#define TRAJANOM_VISIT_MATRIX_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "trajanom/trajectory.hpp"

namespace trajanom {

enum class MatrixMode { binary, count };

const char* to_string(MatrixMode mode);
MatrixMode matrix_mode_from_string(const std::string& s);

/// Sparse user x POI visit matrix. Rows follow the sorted user ids, columns
/// the sorted POI ids, so matrices built from the two halves of a split share
/// index spaces. Immutable after build.
struct VisitMatrix {
    std::vector<std::string> user_ids;  // row -> user
    std::vector<std::string> poi_ids;   // col -> poi
    std::unordered_map<std::string, int> user_index;
    std::unordered_map<std::string, int> poi_index;
    std::vector<std::map<int, double>> rows;  // sparse, ordered by column
    std::vector<std::string> type_of_column;
    MatrixMode mode = MatrixMode::binary;

    int n_users() const { return static_cast<int>(user_ids.size()); }
    int n_pois() const { return static_cast<int>(poi_ids.size()); }
    double at(int row, int col) const;
    std::size_t nonzero_count() const;
};

/// Builds the visit matrix for a dataset. Binary mode: 1 iff the user has at
/// least one record at the POI. Count mode: number of records.
VisitMatrix build_matrix(const TrajectoryDataset& dataset, MatrixMode mode);

/// Per-user venue-type visit counts (count semantics regardless of matrix
/// mode). Throws std::invalid_argument for an unknown user.
std::map<std::string, long> poi_type_histogram(const TrajectoryDataset& train,
                                               const std::string& user);
std::map<std::string, long> poi_type_histogram(const VisitMatrix& count_matrix,
                                               const std::string& user);

/// Coordinate-list export: one "row col value" line per nonzero entry, plus a
/// JSON sidecar holding the row/column index maps and column types.
void export_matrix(const VisitMatrix& m, const std::string& values_path,
                   const std::string& sidecar_path);
VisitMatrix import_matrix(const std::string& values_path,
                          const std::string& sidecar_path);

}  // namespace trajanom

#endif
