#ifndef FFR_SAGE_HPP
#define FFR_SAGE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ffr/graph.hpp"
#include "ffr/linalg.hpp"
#include "ffr/rng.hpp"

namespace ffr {

/// Sentinel id standing in for an absent neighbor; it carries an all-zero
/// feature vector so the pooled max stays well-defined.
inline constexpr int kNoNode = -1;

struct SamplerConfig {
    int depth = 2;                  // K
    std::vector<int> fanouts = {10, 5}; // S_k for k = 1..K
    std::uint64_t seed = 0;
    bool undirected = true;         // false: fan-in neighborhood only
    bool full_neighborhood = false; // deterministic, ignores fanouts/seed
};

/// Neighbor lists used by the sampler: fan-in ∪ fan-out (or fan-in only),
/// deduplicated, ascending node id.
struct NeighborIndex {
    std::vector<std::vector<int>> adj;
};

NeighborIndex build_neighbor_index(const CircuitGraph& graph, bool undirected);

/// Layered sample around a root. layer_nodes[0] = {root};
/// layer_nodes[l+1] lists the children of layer l in order, delimited by
/// child_offsets[l] (size |layer l|+1). In sampled mode every frontier
/// node contributes exactly fanouts[l] children, drawn uniformly with
/// replacement; in full-neighborhood mode it contributes its whole
/// neighbor list (or one sentinel when it has none).
struct SampledTree {
    std::vector<std::vector<int>> layer_nodes;
    std::vector<std::vector<int>> child_offsets;

    int root() const { return layer_nodes[0][0]; }
    int depth() const { return static_cast<int>(layer_nodes.size()) - 1; }
};

SampledTree sample_tree(const NeighborIndex& index, int root, const SamplerConfig& config,
                        SplitMix64& rng);
SampledTree sample_neighborhood(const CircuitGraph& graph, int root, const SamplerConfig& config,
                                SplitMix64& rng);

/// Per-depth trainable weights: the pooling transform (w_pool, b_pool)
/// and the combine matrix applied to concat(h_self, pooled).
struct AggregatorLayer {
    Mat w_pool;    // d_pool x d_prev
    Vec b_pool;    // d_pool
    Mat w_combine; // d_out x (d_prev + d_pool)
};

struct AggregatorParams {
    std::vector<AggregatorLayer> layers; // layer k-1 consumes h^{k-1}

    int depth() const { return static_cast<int>(layers.size()); }
    int input_dim() const { return static_cast<int>(layers.front().w_pool.cols); }
    int output_dim() const { return static_cast<int>(layers.back().w_combine.rows); }
    int dim_at(int k) const; // h^k dimension (k = 0..depth)
    void fill(double v);
    void add_scaled(const AggregatorParams& other, double scale);
};

AggregatorParams init_aggregator_params(int d_in, int d_pool, const std::vector<int>& out_dims,
                                        std::uint64_t seed);

/// Flat views for optimizer-agnostic code and finite differencing.
Vec sage_params_to_flat(const AggregatorParams& params);
void sage_params_from_flat(AggregatorParams& params, const Vec& flat);

/// Max-pooling aggregator at depth k (1-based): elementwise max over
/// relu(w_pool h + b) of the neighbor vectors. The list must be non-empty
/// (sentinel-padded upstream).
Vec aggregate_pool(const std::vector<Vec>& neighbor_vecs, const AggregatorParams& params, int k);

/// Forward pass over one sampled tree; returns the root embedding
/// (L2-normalized at every depth; an all-zero vector stays zero). When
/// `kink_margin` is given it is min-accumulated with the smallest distance
/// to a ReLU or max-pool non-differentiability encountered, so initialize
/// it (e.g. to +inf) before the first call.
struct TreeEval;
Vec embed_tree(const Mat& features, const AggregatorParams& params, const SampledTree& tree,
               double* kink_margin = nullptr);

/// One row per requested node, in request order. Sampling randomness is
/// derived per node from config.seed, so the result is independent of
/// evaluation order (and of `jobs`).
Mat embed_forward(const CircuitGraph& graph, const Mat& features, const AggregatorParams& params,
                  const SamplerConfig& config, const std::vector<int>& nodes, int jobs = 1);

/// Frozen training batch: per-node trees plus positive pairs and their
/// uniform negatives. Gradient checks perturb params against this.
struct SageBatch {
    std::vector<SampledTree> trees;            // indexed by node id
    std::vector<std::pair<int, int>> pairs;    // (v, u) node ids
    std::vector<std::vector<int>> negatives;   // per pair
};

/// Mean negative-sampling loss over the batch pairs:
///   softplus(-z_v.z_u) + sum_q softplus(z_v.z_q)
/// Returns the loss; accumulates d(loss)/d(params) into `grads` when
/// non-null (zeroed first).
double sage_loss_and_grad(const Mat& features, const AggregatorParams& params,
                          const SageBatch& batch, AggregatorParams* grads,
                          double* kink_margin = nullptr);

struct SageTrainConfig {
    int epochs = 5;
    double lr = 0.5;
    int walk_length = 5;    // nodes per walk
    int walks_per_node = 10;
    int window = 2;
    int negatives = 5;      // Q
    int d_pool = 64;
    int d_hidden = 64;      // output dim of depth-1 combine
    int d_emb = 64;
    std::uint64_t seed = 0;
};

struct SageTrainResult {
    AggregatorParams params;
    std::vector<double> loss_history; // [0] = loss before any update
};

/// Unsupervised training: random-walk co-occurrence pairs with uniform
/// negatives, full-batch gradient descent, neighborhoods resampled each
/// epoch. Deterministic for a fixed seed; throws NumericError with the
/// offending epoch if the loss leaves the finite range.
SageTrainResult unsupervised_train(const CircuitGraph& graph, const Mat& features,
                                   const SamplerConfig& sampler, const SageTrainConfig& config);

/// Random-walk corpus (exposed for tests): pairs of node ids co-occurring
/// within `window` positions on walks.
std::vector<std::pair<int, int>> walk_pairs(const NeighborIndex& index, int walk_length,
                                            int walks_per_node, int window, std::uint64_t seed);

std::string sage_params_to_json(const AggregatorParams& params, const SamplerConfig& sampler);
std::pair<AggregatorParams, SamplerConfig> sage_params_from_json(const std::string& text);

std::string embeddings_to_csv(const std::vector<std::string>& names, const Mat& embeddings);
std::pair<std::vector<std::string>, Mat> embeddings_from_csv(const std::string& text);

} // namespace ffr

#endif
