#ifndef TRAJANOM_NCF_HPP
#define TRAJANOM_NCF_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "trajanom/svd.hpp"
#include "trajanom/trajectory.hpp"
#include "trajanom/visit_matrix.hpp"

namespace trajanom {

enum class Activation { relu, tanh };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct HyperParams {
    int embed_dim = 16;
    std::vector<int> mlp_layers = {64, 32, 16};
    Activation activation = Activation::relu;
    double fusion_alpha = 0.5;  // 1.0 = matrix-factorization tower only
    int negatives_per_positive = 4;
    double learning_rate = 0.01;
    int epochs = 20;
    int batch_size = 256;
    std::uint64_t seed = 0;
    int distance_buckets = 10;

    void validate() const;  // throws std::invalid_argument on bad bounds
};

/// Index-space view of the entities a model can score. The last index of the
/// user/poi/type ranges is reserved for unseen entities (cold start).
struct Catalogs {
    std::vector<std::string> user_ids;
    std::vector<std::string> poi_ids;
    std::vector<std::string> type_ids;
    std::unordered_map<std::string, int> user_index;
    std::unordered_map<std::string, int> poi_index;
    std::unordered_map<std::string, int> type_index;
    std::vector<int> poi_type_of_col;  // type index per POI column
    int distance_buckets = 10;
    bool strict = false;  // strict: unknown entity is an error; lenient: unseen slot

    static Catalogs from_matrix(const VisitMatrix& matrix, int distance_buckets,
                                bool strict = false);

    int n_users() const { return static_cast<int>(user_ids.size()); }
    int n_pois() const { return static_cast<int>(poi_ids.size()); }
    int n_types() const { return static_cast<int>(type_ids.size()); }
};

/// Encoded (user, POI) interaction with its visit context.
struct InputTuple {
    int user = 0;
    int hour = 0;         // [0, 23]
    int day = 0;          // [0, 6]
    int dist_bucket = 0;  // [0, distance_buckets)
    int poi = 0;
    int poi_type = 0;
};

struct TrainingExample {
    InputTuple input;
    int label = 0;  // 1 = observed train pair, 0 = sampled negative
};

/// All trainable state. Embedding tables carry one extra row for the
/// reserved unseen index. Treated as immutable during prediction; training
/// is the single writer.
struct ModelState {
    Eigen::MatrixXd user_emb;  // (n_users + 1) x d
    Eigen::MatrixXd poi_emb;   // (n_pois + 1) x d
    Eigen::MatrixXd hour_emb;  // 24 x d
    Eigen::MatrixXd day_emb;   // 7 x d
    Eigen::MatrixXd dist_emb;  // distance_buckets x d
    Eigen::MatrixXd type_emb;  // (n_types + 1) x d
    std::vector<Eigen::MatrixXd> mlp_w;  // layer i: (in_i x out_i)
    std::vector<Eigen::VectorXd> mlp_b;
    Eigen::Vector4d aux_w = Eigen::Vector4d::Zero();  // hour, day, distance, type
    double fusion_alpha = 0.5;
    Activation activation = Activation::relu;

    int embed_dim() const { return static_cast<int>(user_emb.cols()); }
    int n_users() const { return static_cast<int>(user_emb.rows()) - 1; }
    int n_pois() const { return static_cast<int>(poi_emb.rows()) - 1; }
    int n_types() const { return static_cast<int>(type_emb.rows()) - 1; }
};

/// Seeded uniform [-0.05, 0.05] initialization of every table and weight.
ModelState init_model(const HyperParams& hp, int n_users, int n_pois, int n_types);

/// Same shapes as ModelState, zero-initialized.
ModelState zeros_like(const ModelState& state);

/// Distance bucketing: clamp(floor(log2(1 + travel_km)), 0, buckets - 1).
int distance_bucket(double travel_km, int buckets);

/// Encodes one record with its derived features against the catalogs.
/// Unknown user/poi/type throws in strict mode and maps to the reserved
/// unseen index otherwise.
InputTuple encode_input(const StaypointRecord& record, const VisitFeatures& features,
                        const Catalogs& catalogs);

/// One positive example per train record.
std::vector<TrainingExample> make_positive_examples(const TrajectoryDataset& train,
                                                    const Catalogs& catalogs);

/// For every observed positive (weighted by visit count when the matrix is
/// in count mode), draws k negatives uniformly over that user's unvisited
/// POIs (falling back to any zero cell for full rows). Negative contexts use
/// uniform hour/day and distance bucket 0. Deterministic given seed. Throws
/// if the matrix has no zero cell at all.
std::vector<TrainingExample> sample_negatives(const VisitMatrix& train,
                                              int k_per_positive, std::uint64_t seed,
                                              const Catalogs& catalogs);

/// Raw MLP-tower score for one encoded input (identity output activation).
double forward_mlp(const ModelState& state, const InputTuple& z);

/// Matrix-factorization tower: user/poi embedding dot product plus weighted
/// scalar projections of the hour/day/distance/type embeddings.
double forward_gmf(const ModelState& state, const InputTuple& z);

/// alpha * gmf + (1 - alpha) * mlp.
double fuse(double mlp_score, double gmf_score, double alpha);

double fused_score(const ModelState& state, const InputTuple& z);

/// Gradients of the batch-mean binary cross-entropy loss, one slot per
/// parameter group.
struct Gradients {
    Eigen::MatrixXd user_emb, poi_emb, hour_emb, day_emb, dist_emb, type_emb;
    std::vector<Eigen::MatrixXd> mlp_w;
    std::vector<Eigen::VectorXd> mlp_b;
    Eigen::Vector4d aux_w = Eigen::Vector4d::Zero();
};

/// Batch-mean BCE of sigmoid(fused score) against labels.
double batch_loss(const ModelState& state, std::span<const TrainingExample> batch);

/// Analytic gradients of batch_loss (backpropagation).
Gradients compute_gradients(const ModelState& state,
                            std::span<const TrainingExample> batch);

/// Mini-batch SGD over shuffled examples. Returns the per-epoch mean loss
/// trace. Deterministic given hp.seed. Throws std::runtime_error if the loss
/// stops being finite.
std::vector<double> train(ModelState& state, std::span<const TrainingExample> examples,
                          const HyperParams& hp);

/// Per-user feature context used when scoring hypothetical (user, poi)
/// pairs: modal train hour/day and the bucket of the median train travel
/// distance.
struct UserContext {
    int hour = 12;
    int day = 2;
    int dist_bucket = 0;
};

std::vector<UserContext> compute_user_contexts(const TrajectoryDataset& train,
                                               const Catalogs& catalogs,
                                               const UserContext& fallback = {});

/// Fused raw scores for every (user, poi) pair in the catalogs.
ExpectedMatrix predict_expected_matrix(const ModelState& state, const Catalogs& catalogs,
                                       const std::vector<UserContext>& contexts);

struct Checkpoint {
    HyperParams hp;
    Catalogs catalogs;
    ModelState state;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Flat parameter views (fixed order) used by checkpointing and the
/// finite-difference tests.
std::vector<double> flatten_parameters(const ModelState& state);
void set_parameters(ModelState& state, std::span<const double> values);
std::vector<double> flatten_gradients(const Gradients& g);

}  // namespace trajanom

#endif
