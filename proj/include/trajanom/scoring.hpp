#ifndef TRAJANOM_SCORING_HPP
#define TRAJANOM_SCORING_HPP

#include <map>
#include <string>
#include <vector>

#include "trajanom/svd.hpp"
#include "trajanom/trajectory.hpp"
#include "trajanom/visit_matrix.hpp"

namespace trajanom {

enum class SurpriseVariant { abs, new_poi, missing_poi };
enum class Aggregation { sum, max };

const char* to_string(SurpriseVariant v);
const char* to_string(Aggregation a);
SurpriseVariant surprise_variant_from_string(const std::string& s);
Aggregation aggregation_from_string(const std::string& s);

/// Non-negative per-cell discrepancy between expected and observed visits.
struct SurpriseMatrix {
    Eigen::MatrixXd values;  // n_users x n_pois, all >= 0
    SurpriseVariant variant = SurpriseVariant::abs;
};

/// |expected - observed| per cell.
SurpriseMatrix surprise_abs(const ExpectedMatrix& expected, const VisitMatrix& observed);

/// max(0, observed - expected): only visits that happened but were not
/// expected contribute.
SurpriseMatrix surprise_new_poi(const ExpectedMatrix& expected,
                                const VisitMatrix& observed);

/// max(0, expected - observed): only expected visits that did not happen
/// contribute.
SurpriseMatrix surprise_missing_poi(const ExpectedMatrix& expected,
                                    const VisitMatrix& observed);

SurpriseMatrix compute_surprise(const ExpectedMatrix& expected,
                                const VisitMatrix& observed, SurpriseVariant variant);

/// Row sums / row maxima (0 for empty rows).
std::vector<double> aggregate_sum(const SurpriseMatrix& s);
std::vector<double> aggregate_max(const SurpriseMatrix& s);

/// Per-user venue-type distribution over train visits. For a user with no
/// train visits, probs is empty and most_likely is "" (cold start).
struct TypeProfile {
    std::string user_id;
    std::map<std::string, double> probs;
    std::string most_likely;  // argmax, ties broken by smaller label
};

TypeProfile type_profile(const TrajectoryDataset& train, const std::string& user);

/// Count of the user's test visits whose venue type differs from the
/// profile's most likely type. Cold-start profiles score 0.
double poi_type_surprise(const TrajectoryDataset& test, const TypeProfile& profile,
                         const std::string& user);

/// Combined per-user anomaly score: matrix surprise plus type surprise.
double anomaly_score(double matrix_surprise, double type_surprise);

struct RankedUser {
    std::string user_id;
    double score = 0.0;
    int rank = 0;  // 1-based
};

/// Non-increasing by score; ties broken by ascending user id.
std::vector<RankedUser> rank_users(const std::map<std::string, double>& scores);

/// Full per-user score breakdown, ranked.
struct UserScore {
    std::string user_id;
    double matrix_surprise = 0.0;
    double type_surprise = 0.0;
    double total = 0.0;
    int rank = 0;
    bool cold_start = false;
};

struct AnomalyReport {
    std::vector<UserScore> users;  // in rank order
    SurpriseVariant variant = SurpriseVariant::abs;
    Aggregation aggregation = Aggregation::sum;
    std::string model;
};

/// Assembles the report from aligned per-row components of a matrix.
AnomalyReport make_report(const VisitMatrix& observed,
                          const std::vector<double>& matrix_surprise,
                          const std::vector<double>& type_surprise,
                          const std::set<std::string>& cold_start_users,
                          SurpriseVariant variant, Aggregation aggregation,
                          const std::string& model);

void write_report_json(const AnomalyReport& report, const std::string& path);
AnomalyReport read_report_json(const std::string& path);

}  // namespace trajanom

#endif
