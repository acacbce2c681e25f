#include "trajanom/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace trajanom {

namespace {

void check_shapes(const ExpectedMatrix& expected, const VisitMatrix& observed) {
    if (expected.rows() != observed.n_users() || expected.cols() != observed.n_pois()) {
        throw std::invalid_argument("surprise: expected/observed shape mismatch");
    }
}

template <typename CellFn>
SurpriseMatrix apply_surprise(const ExpectedMatrix& expected, const VisitMatrix& observed,
                              SurpriseVariant variant, CellFn cell) {
    check_shapes(expected, observed);
    SurpriseMatrix s;
    s.variant = variant;
    s.values.resize(expected.rows(), expected.cols());
    for (int r = 0; r < expected.rows(); ++r) {
        for (int c = 0; c < expected.cols(); ++c) {
            s.values(r, c) = cell(expected(r, c), observed.at(r, c));
        }
    }
    return s;
}

}  // namespace

const char* to_string(SurpriseVariant v) {
    switch (v) {
        case SurpriseVariant::abs: return "abs";
        case SurpriseVariant::new_poi: return "new_poi";
        case SurpriseVariant::missing_poi: return "missing_poi";
    }
    return "abs";
}

const char* to_string(Aggregation a) {
    return a == Aggregation::sum ? "sum" : "max";
}

SurpriseVariant surprise_variant_from_string(const std::string& s) {
    if (s == "abs") return SurpriseVariant::abs;
    if (s == "new_poi") return SurpriseVariant::new_poi;
    if (s == "missing_poi") return SurpriseVariant::missing_poi;
    throw std::invalid_argument("unknown surprise variant: " + s);
}

Aggregation aggregation_from_string(const std::string& s) {
    if (s == "sum") return Aggregation::sum;
    if (s == "max") return Aggregation::max;
    throw std::invalid_argument("unknown aggregation: " + s);
}

SurpriseMatrix surprise_abs(const ExpectedMatrix& expected, const VisitMatrix& observed) {
    return apply_surprise(expected, observed, SurpriseVariant::abs,
                          [](double phi, double t) { return std::abs(phi - t); });
}

SurpriseMatrix surprise_new_poi(const ExpectedMatrix& expected,
                                const VisitMatrix& observed) {
    return apply_surprise(expected, observed, SurpriseVariant::new_poi,
                          [](double phi, double t) { return std::max(0.0, t - phi); });
}

SurpriseMatrix surprise_missing_poi(const ExpectedMatrix& expected,
                                    const VisitMatrix& observed) {
    return apply_surprise(expected, observed, SurpriseVariant::missing_poi,
                          [](double phi, double t) { return std::max(0.0, phi - t); });
}

SurpriseMatrix compute_surprise(const ExpectedMatrix& expected,
                                const VisitMatrix& observed, SurpriseVariant variant) {
    switch (variant) {
        case SurpriseVariant::abs: return surprise_abs(expected, observed);
        case SurpriseVariant::new_poi: return surprise_new_poi(expected, observed);
        case SurpriseVariant::missing_poi: return surprise_missing_poi(expected, observed);
    }
    throw std::invalid_argument("compute_surprise: bad variant");
}

std::vector<double> aggregate_sum(const SurpriseMatrix& s) {
    std::vector<double> out(static_cast<std::size_t>(s.values.rows()), 0.0);
    for (int r = 0; r < s.values.rows(); ++r) out[r] = s.values.row(r).sum();
    return out;
}

std::vector<double> aggregate_max(const SurpriseMatrix& s) {
    std::vector<double> out(static_cast<std::size_t>(s.values.rows()), 0.0);
    for (int r = 0; r < s.values.rows(); ++r) {
        out[r] = s.values.cols() == 0 ? 0.0 : s.values.row(r).maxCoeff();
    }
    return out;
}

TypeProfile type_profile(const TrajectoryDataset& train, const std::string& user) {
    TypeProfile profile;
    profile.user_id = user;
    auto it = train.trajectories.find(user);
    if (it == train.trajectories.end() || it->second.records.empty()) {
        return profile;  // cold start: empty distribution
    }
    std::map<std::string, long> counts;
    for (const auto& rec : it->second.records) counts[rec.venue_type] += 1;
    const double total = static_cast<double>(it->second.records.size());

    double best_p = -1.0;
    for (const auto& [type, count] : counts) {
        const double p = static_cast<double>(count) / total;
        profile.probs[type] = p;
        if (p > best_p) {  // map iteration is ordered, so ties keep the smaller label
            best_p = p;
            profile.most_likely = type;
        }
    }
    return profile;
}

double poi_type_surprise(const TrajectoryDataset& test, const TypeProfile& profile,
                         const std::string& user) {
    if (profile.most_likely.empty()) return 0.0;  // cold start
    auto it = test.trajectories.find(user);
    if (it == test.trajectories.end()) return 0.0;
    double count = 0.0;
    for (const auto& rec : it->second.records) {
        if (rec.venue_type != profile.most_likely) count += 1.0;
    }
    return count;
}

double anomaly_score(double matrix_surprise, double type_surprise) {
    return matrix_surprise + type_surprise;
}

std::vector<RankedUser> rank_users(const std::map<std::string, double>& scores) {
    std::vector<RankedUser> out;
    out.reserve(scores.size());
    for (const auto& [user, score] : scores) out.push_back({user, score, 0});
    std::sort(out.begin(), out.end(), [](const RankedUser& a, const RankedUser& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.user_id < b.user_id;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i + 1);
    return out;
}

AnomalyReport make_report(const VisitMatrix& observed,
                          const std::vector<double>& matrix_surprise,
                          const std::vector<double>& type_surprise,
                          const std::set<std::string>& cold_start_users,
                          SurpriseVariant variant, Aggregation aggregation,
                          const std::string& model) {
    if (matrix_surprise.size() != observed.user_ids.size() ||
        type_surprise.size() != observed.user_ids.size()) {
        throw std::invalid_argument("make_report: component size mismatch");
    }
    std::map<std::string, double> totals;
    for (std::size_t i = 0; i < observed.user_ids.size(); ++i) {
        totals[observed.user_ids[i]] = anomaly_score(matrix_surprise[i], type_surprise[i]);
    }

    AnomalyReport report;
    report.variant = variant;
    report.aggregation = aggregation;
    report.model = model;
    for (const auto& ranked : rank_users(totals)) {
        const int row = observed.user_index.at(ranked.user_id);
        UserScore us;
        us.user_id = ranked.user_id;
        us.matrix_surprise = matrix_surprise[row];
        us.type_surprise = type_surprise[row];
        us.total = ranked.score;
        us.rank = ranked.rank;
        us.cold_start = cold_start_users.count(ranked.user_id) > 0;
        report.users.push_back(std::move(us));
    }
    return report;
}

void write_report_json(const AnomalyReport& report, const std::string& path) {
    nlohmann::json j;
    j["format"] = "trajanom-report/1";
    j["model"] = report.model;
    j["variant"] = to_string(report.variant);
    j["aggregation"] = to_string(report.aggregation);
    nlohmann::json users = nlohmann::json::array();
    for (const auto& u : report.users) {
        users.push_back({{"user_id", u.user_id},
                         {"matrix_surprise", u.matrix_surprise},
                         {"type_surprise", u.type_surprise},
                         {"total", u.total},
                         {"rank", u.rank},
                         {"cold_start", u.cold_start}});
    }
    j["users"] = std::move(users);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << j.dump(2) << "\n";
}

AnomalyReport read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    AnomalyReport report;
    report.model = j.at("model").get<std::string>();
    report.variant = surprise_variant_from_string(j.at("variant").get<std::string>());
    report.aggregation = aggregation_from_string(j.at("aggregation").get<std::string>());
    for (const auto& u : j.at("users")) {
        UserScore us;
        us.user_id = u.at("user_id").get<std::string>();
        us.matrix_surprise = u.at("matrix_surprise").get<double>();
        us.type_surprise = u.at("type_surprise").get<double>();
        us.total = u.at("total").get<double>();
        us.rank = u.at("rank").get<int>();
        us.cold_start = u.at("cold_start").get<bool>();
        report.users.push_back(std::move(us));
    }
    return report;
}

}  // namespace trajanom
