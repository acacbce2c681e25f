#ifndef TRAJANOM_BASELINES_HPP
#define TRAJANOM_BASELINES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trajanom/trajectory.hpp"

namespace trajanom {

/// Names (and order) of the per-user baseline features.
std::vector<std::string> user_feature_names();

struct UserFeatures {
    Eigen::VectorXd values;  // fixed length, see user_feature_names()
    bool cold_start = false;
};

/// Per-user tabular summary of test-period behavior relative to train:
/// visit counts, distinct POIs/types, travel and stay statistics, night
/// fraction, off-modal-type fraction, and POIs unseen in train. Cold-start
/// users (no train records) get a zero vector with the flag set.
std::map<std::string, UserFeatures> featurize_users(const SplitDataset& split);

struct IsolationForestParams {
    int n_trees = 100;
    int subsample_size = 256;  // capped at the dataset size
};

/// Isolation-forest anomaly scores in (0, 1], higher = more anomalous.
/// Deterministic given the seed. Requires at least 2 users.
std::map<std::string, double> iforest_fit_score(
    const std::map<std::string, UserFeatures>& vectors,
    const IsolationForestParams& params, std::uint64_t seed);

/// Average path-length normalizer c(n) = 2 H(n-1) - 2 (n-1) / n with exact
/// harmonic numbers; c(0) = c(1) = 0.
double iforest_path_normalizer(int n);

/// ECOD: per dimension, -log of the skewness-selected ECDF tail probability
/// (right tails smoothed by 1/n), summed over dimensions. Parameter-free and
/// deterministic. Requires at least 2 users.
std::map<std::string, double> ecod_score(
    const std::map<std::string, UserFeatures>& vectors);

}  // namespace trajanom

#endif
