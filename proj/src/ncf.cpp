#include "trajanom/ncf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "trajanom/rng.hpp"

namespace trajanom {

namespace {

double activate(double x, Activation a) {
    return a == Activation::relu ? std::max(0.0, x) : std::tanh(x);
}

double activate_grad(double pre, Activation a) {
    if (a == Activation::relu) return pre > 0.0 ? 1.0 : 0.0;
    const double t = std::tanh(pre);
    return 1.0 - t * t;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Numerically stable BCE of sigmoid(s) against label y.
double bce(double s, double y) {
    return std::max(s, 0.0) - s * y + std::log1p(std::exp(-std::abs(s)));
}

void check_tuple(const ModelState& state, const InputTuple& z) {
    if (z.user < 0 || z.user >= static_cast<int>(state.user_emb.rows()) || z.poi < 0 ||
        z.poi >= static_cast<int>(state.poi_emb.rows()) || z.hour < 0 || z.hour >= 24 ||
        z.day < 0 || z.day >= 7 || z.dist_bucket < 0 ||
        z.dist_bucket >= static_cast<int>(state.dist_emb.rows()) || z.poi_type < 0 ||
        z.poi_type >= static_cast<int>(state.type_emb.rows())) {
        throw std::invalid_argument("input tuple index out of range");
    }
}

struct MlpForward {
    std::vector<Eigen::MatrixXd> pre;   // pre-activation per layer
    std::vector<Eigen::MatrixXd> post;  // post-activation per layer
};

/// Batched MLP pass; input is one column per example.
MlpForward mlp_forward(const ModelState& state, const Eigen::MatrixXd& input) {
    MlpForward f;
    const std::size_t layers = state.mlp_w.size();
    f.pre.resize(layers);
    f.post.resize(layers);
    const Eigen::MatrixXd* x = &input;
    for (std::size_t i = 0; i < layers; ++i) {
        if (state.mlp_w[i].rows() != x->rows()) {
            throw std::invalid_argument("mlp layer dimension mismatch");
        }
        f.pre[i] = (state.mlp_w[i].transpose() * (*x)).colwise() + state.mlp_b[i];
        if (i + 1 < layers) {
            f.post[i] = f.pre[i].unaryExpr(
                [&](double v) { return activate(v, state.activation); });
        } else {
            f.post[i] = f.pre[i];  // identity output layer
        }
        x = &f.post[i];
    }
    return f;
}

Eigen::MatrixXd gather_input(const ModelState& state,
                             std::span<const TrainingExample> batch) {
    const int d = state.embed_dim();
    Eigen::MatrixXd z(4 * d, static_cast<int>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const InputTuple& t = batch[i].input;
        check_tuple(state, t);
        z.block(0, static_cast<int>(i), d, 1) = state.user_emb.row(t.user).transpose();
        z.block(d, static_cast<int>(i), d, 1) = state.hour_emb.row(t.hour).transpose();
        z.block(2 * d, static_cast<int>(i), d, 1) = state.day_emb.row(t.day).transpose();
        z.block(3 * d, static_cast<int>(i), d, 1) =
            state.dist_emb.row(t.dist_bucket).transpose();
    }
    return z;
}

Gradients make_zero_gradients(const ModelState& state) {
    Gradients g;
    g.user_emb = Eigen::MatrixXd::Zero(state.user_emb.rows(), state.user_emb.cols());
    g.poi_emb = Eigen::MatrixXd::Zero(state.poi_emb.rows(), state.poi_emb.cols());
    g.hour_emb = Eigen::MatrixXd::Zero(state.hour_emb.rows(), state.hour_emb.cols());
    g.day_emb = Eigen::MatrixXd::Zero(state.day_emb.rows(), state.day_emb.cols());
    g.dist_emb = Eigen::MatrixXd::Zero(state.dist_emb.rows(), state.dist_emb.cols());
    g.type_emb = Eigen::MatrixXd::Zero(state.type_emb.rows(), state.type_emb.cols());
    for (const auto& w : state.mlp_w) {
        g.mlp_w.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& b : state.mlp_b) {
        g.mlp_b.push_back(Eigen::VectorXd::Zero(b.size()));
    }
    return g;
}

}  // namespace

const char* to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation: " + s);
}

void HyperParams::validate() const {
    if (embed_dim <= 0) throw std::invalid_argument("embed_dim must be positive");
    if (mlp_layers.empty()) throw std::invalid_argument("mlp_layers must be non-empty");
    for (int w : mlp_layers) {
        if (w <= 0) throw std::invalid_argument("mlp layer widths must be positive");
    }
    if (fusion_alpha < 0.0 || fusion_alpha > 1.0) {
        throw std::invalid_argument("fusion_alpha must be in [0, 1]");
    }
    if (negatives_per_positive <= 0) {
        throw std::invalid_argument("negatives_per_positive must be positive");
    }
    if (learning_rate < 0.0) throw std::invalid_argument("learning_rate must be >= 0");
    if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (batch_size <= 0) throw std::invalid_argument("batch_size must be positive");
    if (distance_buckets <= 0) {
        throw std::invalid_argument("distance_buckets must be positive");
    }
}

Catalogs Catalogs::from_matrix(const VisitMatrix& matrix, int distance_buckets,
                               bool strict) {
    Catalogs c;
    c.user_ids = matrix.user_ids;
    c.poi_ids = matrix.poi_ids;
    c.user_index = matrix.user_index;
    c.poi_index = matrix.poi_index;
    std::set<std::string> types(matrix.type_of_column.begin(),
                                matrix.type_of_column.end());
    for (const auto& t : types) {
        c.type_index.emplace(t, static_cast<int>(c.type_ids.size()));
        c.type_ids.push_back(t);
    }
    c.poi_type_of_col.reserve(matrix.type_of_column.size());
    for (const auto& t : matrix.type_of_column) {
        c.poi_type_of_col.push_back(c.type_index.at(t));
    }
    c.distance_buckets = distance_buckets;
    c.strict = strict;
    return c;
}

ModelState init_model(const HyperParams& hp, int n_users, int n_pois, int n_types) {
    hp.validate();
    if (n_users <= 0 || n_pois <= 0 || n_types <= 0) {
        throw std::invalid_argument("init_model: entity counts must be positive");
    }
    ModelState state;
    state.activation = hp.activation;
    state.fusion_alpha = hp.fusion_alpha;

    std::mt19937_64 engine(hp.seed);
    std::uniform_real_distribution<double> uniform(-0.05, 0.05);
    auto fill = [&](Eigen::MatrixXd& m, int rows, int cols) {
        m.resize(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) m(r, c) = uniform(engine);
        }
    };

    const int d = hp.embed_dim;
    fill(state.user_emb, n_users + 1, d);
    fill(state.poi_emb, n_pois + 1, d);
    fill(state.hour_emb, 24, d);
    fill(state.day_emb, 7, d);
    fill(state.dist_emb, hp.distance_buckets, d);
    fill(state.type_emb, n_types + 1, d);

    int in_dim = 4 * d;
    for (int width : hp.mlp_layers) {
        Eigen::MatrixXd w;
        fill(w, in_dim, width);
        state.mlp_w.push_back(std::move(w));
        Eigen::VectorXd b(width);
        for (int i = 0; i < width; ++i) b(i) = uniform(engine);
        state.mlp_b.push_back(std::move(b));
        in_dim = width;
    }
    for (int i = 0; i < 4; ++i) state.aux_w(i) = uniform(engine);
    return state;
}

ModelState zeros_like(const ModelState& state) {
    ModelState z = state;
    z.user_emb.setZero();
    z.poi_emb.setZero();
    z.hour_emb.setZero();
    z.day_emb.setZero();
    z.dist_emb.setZero();
    z.type_emb.setZero();
    for (auto& w : z.mlp_w) w.setZero();
    for (auto& b : z.mlp_b) b.setZero();
    z.aux_w.setZero();
    return z;
}

int distance_bucket(double travel_km, int buckets) {
    const double raw = std::floor(std::log2(1.0 + std::max(0.0, travel_km)));
    return static_cast<int>(std::clamp(raw, 0.0, static_cast<double>(buckets - 1)));
}

InputTuple encode_input(const StaypointRecord& record, const VisitFeatures& features,
                        const Catalogs& catalogs) {
    auto lookup = [&](const std::unordered_map<std::string, int>& index,
                      const std::string& key, int unseen_slot, const char* what) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (catalogs.strict) {
            throw std::invalid_argument(std::string("encode_input: unknown ") + what +
                                        " '" + key + "'");
        }
        return unseen_slot;
    };

    InputTuple t;
    t.user = lookup(catalogs.user_index, record.user_id, catalogs.n_users(), "user");
    t.poi = lookup(catalogs.poi_index, record.poi_id, catalogs.n_pois(), "poi");
    t.poi_type =
        lookup(catalogs.type_index, record.venue_type, catalogs.n_types(), "venue type");
    t.hour = features.hour;
    t.day = features.day_of_week;
    t.dist_bucket = distance_bucket(features.travel_km, catalogs.distance_buckets);
    return t;
}

std::vector<TrainingExample> make_positive_examples(const TrajectoryDataset& train,
                                                    const Catalogs& catalogs) {
    std::vector<TrainingExample> out;
    out.reserve(train.record_count());
    for (const auto& [user, traj] : train.trajectories) {
        const auto features = derive_features(traj);
        for (std::size_t i = 0; i < traj.records.size(); ++i) {
            out.push_back({encode_input(traj.records[i], features[i], catalogs), 1});
        }
    }
    return out;
}

std::vector<TrainingExample> sample_negatives(const VisitMatrix& train,
                                              int k_per_positive, std::uint64_t seed,
                                              const Catalogs& catalogs) {
    const std::size_t cells =
        static_cast<std::size_t>(train.n_users()) * static_cast<std::size_t>(train.n_pois());
    if (train.nonzero_count() >= cells) {
        throw std::invalid_argument("sample_negatives: matrix has no unvisited cell");
    }
    if (k_per_positive <= 0) {
        throw std::invalid_argument("sample_negatives: k must be positive");
    }

    RngStream rng(seed);
    std::vector<TrainingExample> out;
    auto type_of = [&](int col) {
        auto it = catalogs.type_index.find(train.type_of_column[col]);
        return it == catalogs.type_index.end() ? catalogs.n_types() : it->second;
    };

    for (int row = 0; row < train.n_users(); ++row) {
        const auto& sparse_row = train.rows[row];
        const bool row_full = static_cast<int>(sparse_row.size()) >= train.n_pois();
        long positives_in_row = 0;
        for (const auto& [col, value] : sparse_row) {
            positives_in_row +=
                train.mode == MatrixMode::count ? std::lround(value) : 1;
        }
        const long wanted = positives_in_row * k_per_positive;
        for (long n = 0; n < wanted; ++n) {
            int user = row;
            int poi = -1;
            if (!row_full) {
                for (int attempt = 0; attempt < 512 && poi < 0; ++attempt) {
                    const int candidate = rng.uniform_int(0, train.n_pois() - 1);
                    if (sparse_row.find(candidate) == sparse_row.end()) poi = candidate;
                }
                if (poi < 0) {
                    // Dense row: fall back to direct enumeration of zeros.
                    for (int c = 0; c < train.n_pois(); ++c) {
                        if (sparse_row.find(c) == sparse_row.end()) {
                            poi = c;
                            break;
                        }
                    }
                }
            }
            while (poi < 0) {
                // The user's row is completely full; draw any zero cell.
                const int r = rng.uniform_int(0, train.n_users() - 1);
                const int c = rng.uniform_int(0, train.n_pois() - 1);
                if (train.rows[r].find(c) == train.rows[r].end()) {
                    user = r;
                    poi = c;
                }
            }
            TrainingExample ex;
            ex.label = 0;
            ex.input.user = user;
            ex.input.poi = poi;
            ex.input.poi_type = type_of(poi);
            ex.input.hour = rng.uniform_int(0, 23);
            ex.input.day = rng.uniform_int(0, 6);
            ex.input.dist_bucket = 0;
            out.push_back(ex);
        }
    }
    return out;
}

double forward_mlp(const ModelState& state, const InputTuple& z) {
    check_tuple(state, z);
    TrainingExample ex;
    ex.input = z;
    const Eigen::MatrixXd input = gather_input(state, std::span(&ex, 1));
    const MlpForward f = mlp_forward(state, input);
    return f.post.back().col(0).mean();
}

double forward_gmf(const ModelState& state, const InputTuple& z) {
    check_tuple(state, z);
    const double interaction = state.user_emb.row(z.user).dot(state.poi_emb.row(z.poi));
    const double aux = state.aux_w(0) * state.hour_emb.row(z.hour).mean() +
                       state.aux_w(1) * state.day_emb.row(z.day).mean() +
                       state.aux_w(2) * state.dist_emb.row(z.dist_bucket).mean() +
                       state.aux_w(3) * state.type_emb.row(z.poi_type).mean();
    return interaction + aux;
}

double fuse(double mlp_score, double gmf_score, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) {
        throw std::invalid_argument("fuse: alpha must be in [0, 1]");
    }
    return alpha * gmf_score + (1.0 - alpha) * mlp_score;
}

double fused_score(const ModelState& state, const InputTuple& z) {
    return fuse(forward_mlp(state, z), forward_gmf(state, z), state.fusion_alpha);
}

double batch_loss(const ModelState& state, std::span<const TrainingExample> batch) {
    if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
    const Eigen::MatrixXd input = gather_input(state, batch);
    const MlpForward f = mlp_forward(state, input);
    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double mlp = f.post.back().col(static_cast<int>(i)).mean();
        const double gmf = forward_gmf(state, batch[i].input);
        const double s = fuse(mlp, gmf, state.fusion_alpha);
        loss += bce(s, static_cast<double>(batch[i].label));
    }
    return loss / static_cast<double>(batch.size());
}

Gradients compute_gradients(const ModelState& state,
                            std::span<const TrainingExample> batch) {
    if (batch.empty()) throw std::invalid_argument("compute_gradients: empty batch");
    const int bsz = static_cast<int>(batch.size());
    const int d = state.embed_dim();
    const double alpha = state.fusion_alpha;
    const std::size_t layers = state.mlp_w.size();

    const Eigen::MatrixXd input = gather_input(state, batch);
    const MlpForward f = mlp_forward(state, input);

    // dL/ds per example, for the batch-mean loss.
    Eigen::RowVectorXd dscore(bsz);
    for (int i = 0; i < bsz; ++i) {
        const double mlp = f.post.back().col(i).mean();
        const double gmf = forward_gmf(state, batch[i].input);
        const double s = fuse(mlp, gmf, alpha);
        dscore(i) =
            (sigmoid(s) - static_cast<double>(batch[i].label)) / static_cast<double>(bsz);
    }

    Gradients g = make_zero_gradients(state);

    // MLP tower. The scalar score is the mean of the last layer's outputs.
    const int out_dim = static_cast<int>(f.post.back().rows());
    Eigen::MatrixXd delta =
        Eigen::VectorXd::Constant(out_dim, (1.0 - alpha) / out_dim) * dscore;
    for (std::size_t layer = layers; layer-- > 0;) {
        const Eigen::MatrixXd& below = layer == 0 ? input : f.post[layer - 1];
        g.mlp_w[layer] = below * delta.transpose();
        g.mlp_b[layer] = delta.rowwise().sum();
        if (layer > 0) {
            delta = (state.mlp_w[layer] * delta)
                        .cwiseProduct(f.pre[layer - 1].unaryExpr([&](double v) {
                            return activate_grad(v, state.activation);
                        }));
        } else {
            const Eigen::MatrixXd dinput = state.mlp_w[0] * delta;  // 4d x batch
            for (int i = 0; i < bsz; ++i) {
                const InputTuple& t = batch[i].input;
                g.user_emb.row(t.user) += dinput.block(0, i, d, 1).transpose();
                g.hour_emb.row(t.hour) += dinput.block(d, i, d, 1).transpose();
                g.day_emb.row(t.day) += dinput.block(2 * d, i, d, 1).transpose();
                g.dist_emb.row(t.dist_bucket) += dinput.block(3 * d, i, d, 1).transpose();
            }
        }
    }

    // Matrix-factorization tower.
    const double inv_d = 1.0 / static_cast<double>(d);
    for (int i = 0; i < bsz; ++i) {
        const InputTuple& t = batch[i].input;
        const double ga = alpha * dscore(i);
        if (ga == 0.0) continue;
        g.user_emb.row(t.user) += ga * state.poi_emb.row(t.poi);
        g.poi_emb.row(t.poi) += ga * state.user_emb.row(t.user);
        g.aux_w(0) += ga * state.hour_emb.row(t.hour).mean();
        g.aux_w(1) += ga * state.day_emb.row(t.day).mean();
        g.aux_w(2) += ga * state.dist_emb.row(t.dist_bucket).mean();
        g.aux_w(3) += ga * state.type_emb.row(t.poi_type).mean();
        g.hour_emb.row(t.hour).array() += ga * state.aux_w(0) * inv_d;
        g.day_emb.row(t.day).array() += ga * state.aux_w(1) * inv_d;
        g.dist_emb.row(t.dist_bucket).array() += ga * state.aux_w(2) * inv_d;
        g.type_emb.row(t.poi_type).array() += ga * state.aux_w(3) * inv_d;
    }
    return g;
}

std::vector<double> train(ModelState& state, std::span<const TrainingExample> examples,
                          const HyperParams& hp) {
    hp.validate();
    if (examples.empty()) throw std::invalid_argument("train: no examples");

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffler(derive_seed(hp.seed, 0x7261696eULL));

    std::vector<double> trace;
    trace.reserve(hp.epochs);
    std::vector<TrainingExample> batch;
    batch.reserve(hp.batch_size);

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffler);
        double loss_sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(hp.batch_size)) {
            batch.clear();
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(hp.batch_size));
            for (std::size_t i = start; i < end; ++i) batch.push_back(examples[order[i]]);

            loss_sum += batch_loss(state, batch) * static_cast<double>(batch.size());
            seen += batch.size();
            const Gradients g = compute_gradients(state, batch);

            const double lr = hp.learning_rate;
            state.user_emb -= lr * g.user_emb;
            state.poi_emb -= lr * g.poi_emb;
            state.hour_emb -= lr * g.hour_emb;
            state.day_emb -= lr * g.day_emb;
            state.dist_emb -= lr * g.dist_emb;
            state.type_emb -= lr * g.type_emb;
            for (std::size_t l = 0; l < state.mlp_w.size(); ++l) {
                state.mlp_w[l] -= lr * g.mlp_w[l];
                state.mlp_b[l] -= lr * g.mlp_b[l];
            }
            state.aux_w -= lr * g.aux_w;
        }
        const double epoch_loss = loss_sum / static_cast<double>(seen);
        if (!std::isfinite(epoch_loss)) {
            throw std::runtime_error("train: loss is not finite at epoch " +
                                     std::to_string(epoch + 1) +
                                     " (try a smaller learning rate)");
        }
        trace.push_back(epoch_loss);
    }
    return trace;
}

std::vector<UserContext> compute_user_contexts(const TrajectoryDataset& train,
                                               const Catalogs& catalogs,
                                               const UserContext& fallback) {
    std::vector<UserContext> contexts(static_cast<std::size_t>(catalogs.n_users()),
                                      fallback);
    for (const auto& [user, traj] : train.trajectories) {
        auto it = catalogs.user_index.find(user);
        if (it == catalogs.user_index.end() || traj.records.empty()) continue;

        const auto features = derive_features(traj);
        std::array<int, 24> hour_counts{};
        std::array<int, 7> day_counts{};
        std::vector<double> travels;
        travels.reserve(features.size());
        for (const auto& f : features) {
            ++hour_counts[f.hour];
            ++day_counts[f.day_of_week];
            travels.push_back(f.travel_km);
        }
        UserContext ctx;
        ctx.hour = static_cast<int>(std::distance(
            hour_counts.begin(), std::max_element(hour_counts.begin(), hour_counts.end())));
        ctx.day = static_cast<int>(std::distance(
            day_counts.begin(), std::max_element(day_counts.begin(), day_counts.end())));
        std::nth_element(travels.begin(), travels.begin() + (travels.size() - 1) / 2,
                         travels.end());
        ctx.dist_bucket = distance_bucket(travels[(travels.size() - 1) / 2],
                                          catalogs.distance_buckets);
        contexts[it->second] = ctx;
    }
    return contexts;
}

ExpectedMatrix predict_expected_matrix(const ModelState& state, const Catalogs& catalogs,
                                       const std::vector<UserContext>& contexts) {
    const int n_users = catalogs.n_users();
    const int n_pois = catalogs.n_pois();
    if (state.n_users() != n_users || state.n_pois() != n_pois) {
        throw std::invalid_argument("predict: state/catalog size mismatch");
    }
    if (static_cast<int>(contexts.size()) != n_users) {
        throw std::invalid_argument("predict: one context per user required");
    }
    const double alpha = state.fusion_alpha;

    // Per-user pieces: MLP score and the user-side auxiliary terms.
    Eigen::VectorXd user_part(n_users);
    for (int u = 0; u < n_users; ++u) {
        const UserContext& ctx = contexts[u];
        InputTuple t;
        t.user = u;
        t.hour = ctx.hour;
        t.day = ctx.day;
        t.dist_bucket = ctx.dist_bucket;
        t.poi = 0;
        t.poi_type = 0;
        const double mlp = forward_mlp(state, t);
        const double user_aux = state.aux_w(0) * state.hour_emb.row(ctx.hour).mean() +
                                state.aux_w(1) * state.day_emb.row(ctx.day).mean() +
                                state.aux_w(2) * state.dist_emb.row(ctx.dist_bucket).mean();
        user_part(u) = alpha * user_aux + (1.0 - alpha) * mlp;
    }

    // Per-poi piece: the type auxiliary term.
    if (static_cast<int>(catalogs.poi_type_of_col.size()) != n_pois) {
        throw std::invalid_argument("predict: catalogs missing per-poi types");
    }
    Eigen::VectorXd poi_part(n_pois);
    for (int p = 0; p < n_pois; ++p) {
        poi_part(p) = alpha * state.aux_w(3) *
                      state.type_emb.row(catalogs.poi_type_of_col[p]).mean();
    }

    ExpectedMatrix phi = alpha * (state.user_emb.topRows(n_users) *
                                  state.poi_emb.topRows(n_pois).transpose());
    phi.colwise() += user_part;
    phi.rowwise() += poi_part.transpose();
    return phi;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    nlohmann::json j;
    j["format"] = "trajanom-ncf/1";
    j["hyperparams"] = {{"embed_dim", ckpt.hp.embed_dim},
                        {"mlp_layers", ckpt.hp.mlp_layers},
                        {"activation", to_string(ckpt.hp.activation)},
                        {"fusion_alpha", ckpt.hp.fusion_alpha},
                        {"negatives_per_positive", ckpt.hp.negatives_per_positive},
                        {"learning_rate", ckpt.hp.learning_rate},
                        {"epochs", ckpt.hp.epochs},
                        {"batch_size", ckpt.hp.batch_size},
                        {"seed", ckpt.hp.seed},
                        {"distance_buckets", ckpt.hp.distance_buckets}};
    j["catalogs"] = {{"users", ckpt.catalogs.user_ids},
                     {"pois", ckpt.catalogs.poi_ids},
                     {"types", ckpt.catalogs.type_ids},
                     {"poi_types", ckpt.catalogs.poi_type_of_col}};
    j["parameters"] = flatten_parameters(ckpt.state);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump() << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != "trajanom-ncf/1") {
        throw std::runtime_error("unsupported checkpoint format in " + path);
    }

    Checkpoint ckpt;
    const auto& h = j.at("hyperparams");
    ckpt.hp.embed_dim = h.at("embed_dim").get<int>();
    ckpt.hp.mlp_layers = h.at("mlp_layers").get<std::vector<int>>();
    ckpt.hp.activation = activation_from_string(h.at("activation").get<std::string>());
    ckpt.hp.fusion_alpha = h.at("fusion_alpha").get<double>();
    ckpt.hp.negatives_per_positive = h.at("negatives_per_positive").get<int>();
    ckpt.hp.learning_rate = h.at("learning_rate").get<double>();
    ckpt.hp.epochs = h.at("epochs").get<int>();
    ckpt.hp.batch_size = h.at("batch_size").get<int>();
    ckpt.hp.seed = h.at("seed").get<std::uint64_t>();
    ckpt.hp.distance_buckets = h.at("distance_buckets").get<int>();

    ckpt.catalogs.user_ids = j.at("catalogs").at("users").get<std::vector<std::string>>();
    ckpt.catalogs.poi_ids = j.at("catalogs").at("pois").get<std::vector<std::string>>();
    ckpt.catalogs.type_ids = j.at("catalogs").at("types").get<std::vector<std::string>>();
    ckpt.catalogs.poi_type_of_col =
        j.at("catalogs").at("poi_types").get<std::vector<int>>();
    ckpt.catalogs.distance_buckets = ckpt.hp.distance_buckets;
    for (std::size_t i = 0; i < ckpt.catalogs.user_ids.size(); ++i) {
        ckpt.catalogs.user_index.emplace(ckpt.catalogs.user_ids[i], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < ckpt.catalogs.poi_ids.size(); ++i) {
        ckpt.catalogs.poi_index.emplace(ckpt.catalogs.poi_ids[i], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < ckpt.catalogs.type_ids.size(); ++i) {
        ckpt.catalogs.type_index.emplace(ckpt.catalogs.type_ids[i], static_cast<int>(i));
    }

    ckpt.state = init_model(ckpt.hp, ckpt.catalogs.n_users(), ckpt.catalogs.n_pois(),
                            ckpt.catalogs.n_types());
    const auto params = j.at("parameters").get<std::vector<double>>();
    set_parameters(ckpt.state, params);
    return ckpt;
}

namespace {

template <typename Fn>
void visit_parameter_blocks(ModelState& state, Fn&& fn) {
    fn(state.user_emb);
    fn(state.poi_emb);
    fn(state.hour_emb);
    fn(state.day_emb);
    fn(state.dist_emb);
    fn(state.type_emb);
    for (auto& w : state.mlp_w) fn(w);
    for (auto& b : state.mlp_b) fn(b);
}

}  // namespace

std::vector<double> flatten_parameters(const ModelState& state) {
    std::vector<double> out;
    auto& mutable_state = const_cast<ModelState&>(state);
    visit_parameter_blocks(mutable_state, [&](auto& block) {
        out.insert(out.end(), block.data(), block.data() + block.size());
    });
    for (int i = 0; i < 4; ++i) out.push_back(state.aux_w(i));
    return out;
}

void set_parameters(ModelState& state, std::span<const double> values) {
    std::size_t offset = 0;
    visit_parameter_blocks(state, [&](auto& block) {
        if (offset + static_cast<std::size_t>(block.size()) > values.size()) {
            throw std::invalid_argument("set_parameters: too few values");
        }
        std::copy(values.begin() + offset,
                  values.begin() + offset + static_cast<std::size_t>(block.size()),
                  block.data());
        offset += static_cast<std::size_t>(block.size());
    });
    if (offset + 4 != values.size()) {
        throw std::invalid_argument("set_parameters: size mismatch");
    }
    for (int i = 0; i < 4; ++i) state.aux_w(i) = values[offset + i];
}

std::vector<double> flatten_gradients(const Gradients& g) {
    std::vector<double> out;
    auto append = [&](const auto& block) {
        out.insert(out.end(), block.data(), block.data() + block.size());
    };
    append(g.user_emb);
    append(g.poi_emb);
    append(g.hour_emb);
    append(g.day_emb);
    append(g.dist_emb);
    append(g.type_emb);
    for (const auto& w : g.mlp_w) append(w);
    for (const auto& b : g.mlp_b) append(b);
    for (int i = 0; i < 4; ++i) out.push_back(g.aux_w(i));
    return out;
}

}  // namespace trajanom
