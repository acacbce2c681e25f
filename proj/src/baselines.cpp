#include "trajanom/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>

#include "trajanom/rng.hpp"
#include "trajanom/scoring.hpp"

namespace trajanom {

std::vector<std::string> user_feature_names() {
    return {"test_visits",    "distinct_pois",  "distinct_types",
            "mean_travel_km", "max_travel_km",  "mean_stay_minutes",
            "night_fraction", "off_type_fraction", "unseen_pois"};
}

std::map<std::string, UserFeatures> featurize_users(const SplitDataset& split) {
    const std::size_t dim = user_feature_names().size();
    std::map<std::string, UserFeatures> out;

    for (const auto& [user, test_traj] : split.test.trajectories) {
        UserFeatures f;
        f.values = Eigen::VectorXd::Zero(static_cast<int>(dim));
        if (split.cold_start_users.count(user) > 0) {
            f.cold_start = true;
            out.emplace(user, std::move(f));
            continue;
        }

        std::set<std::string> train_pois;
        auto train_it = split.train.trajectories.find(user);
        if (train_it != split.train.trajectories.end()) {
            for (const auto& rec : train_it->second.records) {
                train_pois.insert(rec.poi_id);
            }
        }
        const TypeProfile profile = type_profile(split.train, user);

        const auto& records = test_traj.records;
        const auto features = derive_features(test_traj);
        std::set<std::string> pois, types;
        double travel_sum = 0.0, travel_max = 0.0, stay_sum = 0.0;
        double night = 0.0, off_type = 0.0, unseen = 0.0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            pois.insert(records[i].poi_id);
            types.insert(records[i].venue_type);
            travel_sum += features[i].travel_km;
            travel_max = std::max(travel_max, features[i].travel_km);
            stay_sum += features[i].stay_minutes;
            if (features[i].hour >= 22 || features[i].hour < 6) night += 1.0;
            if (!profile.most_likely.empty() &&
                records[i].venue_type != profile.most_likely) {
                off_type += 1.0;
            }
            if (train_pois.count(records[i].poi_id) == 0) unseen += 1.0;
        }
        const double n = static_cast<double>(records.size());
        f.values(0) = n;
        f.values(1) = static_cast<double>(pois.size());
        f.values(2) = static_cast<double>(types.size());
        f.values(3) = n > 0 ? travel_sum / n : 0.0;
        f.values(4) = travel_max;
        f.values(5) = n > 0 ? stay_sum / n : 0.0;
        f.values(6) = n > 0 ? night / n : 0.0;
        f.values(7) = n > 0 ? off_type / n : 0.0;
        f.values(8) = unseen;
        out.emplace(user, std::move(f));
    }
    return out;
}

double iforest_path_normalizer(int n) {
    if (n <= 1) return 0.0;
    double harmonic = 0.0;
    for (int i = 1; i <= n - 1; ++i) harmonic += 1.0 / static_cast<double>(i);
    return 2.0 * harmonic - 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
}

namespace {

struct IsoNode {
    int split_dim = -1;
    double split_value = 0.0;
    int size = 0;  // leaf sample size
    std::unique_ptr<IsoNode> left, right;

    bool is_leaf() const { return split_dim < 0; }
};

std::unique_ptr<IsoNode> build_iso_tree(const std::vector<Eigen::VectorXd>& data,
                                        std::vector<int>& indices, int depth,
                                        int height_limit, RngStream& rng) {
    auto node = std::make_unique<IsoNode>();
    node->size = static_cast<int>(indices.size());
    if (indices.size() <= 1 || depth >= height_limit) return node;

    // Candidate dimensions with any spread in this node.
    const int dim = static_cast<int>(data.front().size());
    std::vector<int> usable;
    for (int d = 0; d < dim; ++d) {
        double lo = data[indices[0]](d), hi = lo;
        for (int idx : indices) {
            lo = std::min(lo, data[idx](d));
            hi = std::max(hi, data[idx](d));
        }
        if (hi > lo) usable.push_back(d);
    }
    if (usable.empty()) return node;  // all points identical

    const int d = usable[rng.uniform_int(0, static_cast<int>(usable.size()) - 1)];
    double lo = data[indices[0]](d), hi = lo;
    for (int idx : indices) {
        lo = std::min(lo, data[idx](d));
        hi = std::max(hi, data[idx](d));
    }
    const double split = rng.uniform_range(lo, hi);

    std::vector<int> left_idx, right_idx;
    for (int idx : indices) {
        (data[idx](d) < split ? left_idx : right_idx).push_back(idx);
    }
    if (left_idx.empty() || right_idx.empty()) return node;

    node->split_dim = d;
    node->split_value = split;
    node->left = build_iso_tree(data, left_idx, depth + 1, height_limit, rng);
    node->right = build_iso_tree(data, right_idx, depth + 1, height_limit, rng);
    return node;
}

double iso_path_length(const IsoNode* node, const Eigen::VectorXd& x, int depth) {
    if (node->is_leaf()) {
        return static_cast<double>(depth) + iforest_path_normalizer(node->size);
    }
    const IsoNode* next =
        x(node->split_dim) < node->split_value ? node->left.get() : node->right.get();
    return iso_path_length(next, x, depth + 1);
}

}  // namespace

std::map<std::string, double> iforest_fit_score(
    const std::map<std::string, UserFeatures>& vectors,
    const IsolationForestParams& params, std::uint64_t seed) {
    if (vectors.size() < 2) {
        throw std::invalid_argument("iforest_fit_score: need at least 2 users");
    }
    std::vector<std::string> users;
    std::vector<Eigen::VectorXd> data;
    users.reserve(vectors.size());
    for (const auto& [user, f] : vectors) {
        users.push_back(user);
        data.push_back(f.values);
    }

    const int n = static_cast<int>(data.size());
    const int psi = std::min(params.subsample_size, n);
    const int height_limit =
        static_cast<int>(std::ceil(std::log2(std::max(2, psi))));

    std::vector<double> path_sums(data.size(), 0.0);
    for (int t = 0; t < params.n_trees; ++t) {
        RngStream rng(derive_seed(seed, 0x69666f72ULL, static_cast<std::uint64_t>(t)));
        // Seeded subsample without replacement.
        std::vector<int> pool(data.size());
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng.engine());
        std::vector<int> sample(pool.begin(), pool.begin() + psi);

        const auto tree = build_iso_tree(data, sample, 0, height_limit, rng);
        for (std::size_t i = 0; i < data.size(); ++i) {
            path_sums[i] += iso_path_length(tree.get(), data[i], 0);
        }
    }

    const double c = iforest_path_normalizer(psi);
    std::map<std::string, double> scores;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const double mean_path = path_sums[i] / static_cast<double>(params.n_trees);
        const double exponent = c > 0.0 ? -mean_path / c : 0.0;
        scores[users[i]] = std::pow(2.0, exponent);
    }
    return scores;
}

std::map<std::string, double> ecod_score(
    const std::map<std::string, UserFeatures>& vectors) {
    if (vectors.size() < 2) {
        throw std::invalid_argument("ecod_score: need at least 2 users");
    }
    std::vector<std::string> users;
    std::vector<Eigen::VectorXd> data;
    for (const auto& [user, f] : vectors) {
        users.push_back(user);
        data.push_back(f.values);
    }
    const int n = static_cast<int>(data.size());
    const int dim = static_cast<int>(data.front().size());
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> totals(data.size(), 0.0);
    std::vector<double> column(data.size());
    for (int d = 0; d < dim; ++d) {
        for (int i = 0; i < n; ++i) column[i] = data[i](d);

        // Sample skewness decides which tail is informative for this
        // dimension; constant columns default to the right tail.
        double mean = 0.0;
        for (double v : column) mean += v;
        mean *= inv_n;
        double m2 = 0.0, m3 = 0.0;
        for (double v : column) {
            const double c = v - mean;
            m2 += c * c;
            m3 += c * c * c;
        }
        m2 *= inv_n;
        m3 *= inv_n;
        const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;

        std::vector<double> sorted = column;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < n; ++i) {
            const double x = column[i];
            // F(x) = P(X <= x) from the ECDF.
            const double le = static_cast<double>(
                std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
            const double left_tail = le * inv_n;
            const double right_tail = 1.0 - left_tail + inv_n;
            const double tail = skew < 0.0 ? left_tail : right_tail;
            totals[i] += -std::log(tail);
        }
    }

    std::map<std::string, double> scores;
    for (std::size_t i = 0; i < users.size(); ++i) scores[users[i]] = totals[i];
    return scores;
}

}  // namespace trajanom
