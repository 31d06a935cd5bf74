#include "ffr/sage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "ffr/error.hpp"
#include "ffr/textio.hpp"

namespace ffr {

using nlohmann::json;

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 m(a + 0x9e3779b97f4a7c15ULL * (b + 1));
    return m.next();
}

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

} // namespace

NeighborIndex build_neighbor_index(const CircuitGraph& graph, bool undirected) {
    NeighborIndex index;
    index.adj.resize(graph.nodes.size());
    for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
        auto& out = index.adj[v];
        out.insert(out.end(), graph.fanin[v].begin(), graph.fanin[v].end());
        if (undirected) out.insert(out.end(), graph.fanout[v].begin(), graph.fanout[v].end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return index;
}

SampledTree sample_tree(const NeighborIndex& index, int root, const SamplerConfig& config,
                        SplitMix64& rng) {
    if (config.depth < 1) throw DataError("sampler depth must be >= 1");
    if (!config.full_neighborhood &&
        static_cast<int>(config.fanouts.size()) < config.depth)
        throw DataError("sampler needs one fanout per depth");
    if (root < 0 || root >= static_cast<int>(index.adj.size()))
        throw DataError("sampler root out of range");

    SampledTree tree;
    tree.layer_nodes.push_back({root});
    tree.child_offsets.resize(config.depth);

    for (int level = 0; level < config.depth; ++level) {
        const auto& frontier = tree.layer_nodes[level];
        auto& offsets = tree.child_offsets[level];
        offsets.assign(1, 0);
        std::vector<int> next;

        for (int u : frontier) {
            if (config.full_neighborhood) {
                if (u == kNoNode || index.adj[u].empty()) {
                    next.push_back(kNoNode);
                } else {
                    next.insert(next.end(), index.adj[u].begin(), index.adj[u].end());
                }
            } else {
                const int want = config.fanouts[level];
                if (want < 1) throw DataError("sampler fanouts must be >= 1");
                if (u == kNoNode || index.adj[u].empty()) {
                    next.insert(next.end(), want, kNoNode);
                } else {
                    const auto& nbrs = index.adj[u];
                    for (int s = 0; s < want; ++s)
                        next.push_back(nbrs[rng.uniform_below(nbrs.size())]);
                }
            }
            offsets.push_back(static_cast<int>(next.size()));
        }
        tree.layer_nodes.push_back(std::move(next));
    }
    return tree;
}

SampledTree sample_neighborhood(const CircuitGraph& graph, int root, const SamplerConfig& config,
                                SplitMix64& rng) {
    NeighborIndex index = build_neighbor_index(graph, config.undirected);
    return sample_tree(index, root, config, rng);
}

int AggregatorParams::dim_at(int k) const {
    if (k == 0) return input_dim();
    return static_cast<int>(layers[k - 1].w_combine.rows);
}

void AggregatorParams::fill(double v) {
    for (auto& layer : layers) {
        layer.w_pool.fill(v);
        layer.b_pool.assign(layer.b_pool.size(), v);
        layer.w_combine.fill(v);
    }
}

void AggregatorParams::add_scaled(const AggregatorParams& other, double scale) {
    for (std::size_t k = 0; k < layers.size(); ++k) {
        auto& dst = layers[k];
        const auto& src = other.layers[k];
        for (std::size_t i = 0; i < dst.w_pool.data.size(); ++i)
            dst.w_pool.data[i] += scale * src.w_pool.data[i];
        for (std::size_t i = 0; i < dst.b_pool.size(); ++i) dst.b_pool[i] += scale * src.b_pool[i];
        for (std::size_t i = 0; i < dst.w_combine.data.size(); ++i)
            dst.w_combine.data[i] += scale * src.w_combine.data[i];
    }
}

AggregatorParams init_aggregator_params(int d_in, int d_pool, const std::vector<int>& out_dims,
                                        std::uint64_t seed) {
    if (d_in < 1 || d_pool < 1 || out_dims.empty())
        throw DataError("aggregator dimensions must be positive");
    SplitMix64 rng(seed);
    AggregatorParams params;
    int d_prev = d_in;
    for (int d_out : out_dims) {
        AggregatorLayer layer;
        layer.w_pool = Mat(d_pool, d_prev);
        layer.b_pool.assign(d_pool, 0.0);
        layer.w_combine = Mat(d_out, d_prev + d_pool);
        double lim_pool = std::sqrt(6.0 / (d_prev + d_pool));
        for (auto& w : layer.w_pool.data) w = rng.uniform(-lim_pool, lim_pool);
        double lim_comb = std::sqrt(6.0 / (d_prev + d_pool + d_out));
        for (auto& w : layer.w_combine.data) w = rng.uniform(-lim_comb, lim_comb);
        params.layers.push_back(std::move(layer));
        d_prev = d_out;
    }
    return params;
}

Vec sage_params_to_flat(const AggregatorParams& params) {
    Vec flat;
    for (const auto& layer : params.layers) {
        flat.insert(flat.end(), layer.w_pool.data.begin(), layer.w_pool.data.end());
        flat.insert(flat.end(), layer.b_pool.begin(), layer.b_pool.end());
        flat.insert(flat.end(), layer.w_combine.data.begin(), layer.w_combine.data.end());
    }
    return flat;
}

void sage_params_from_flat(AggregatorParams& params, const Vec& flat) {
    std::size_t pos = 0;
    for (auto& layer : params.layers) {
        std::copy_n(flat.begin() + pos, layer.w_pool.data.size(), layer.w_pool.data.begin());
        pos += layer.w_pool.data.size();
        std::copy_n(flat.begin() + pos, layer.b_pool.size(), layer.b_pool.begin());
        pos += layer.b_pool.size();
        std::copy_n(flat.begin() + pos, layer.w_combine.data.size(), layer.w_combine.data.begin());
        pos += layer.w_combine.data.size();
    }
    if (pos != flat.size()) throw DataError("flat parameter vector has wrong length");
}

Vec aggregate_pool(const std::vector<Vec>& neighbor_vecs, const AggregatorParams& params, int k) {
    if (k < 1 || k > params.depth()) throw DataError("aggregator depth out of range");
    if (neighbor_vecs.empty()) throw DataError("aggregate_pool needs at least one neighbor vector");
    const auto& layer = params.layers[k - 1];
    const std::size_t d_prev = layer.w_pool.cols;
    const std::size_t d_pool = layer.w_pool.rows;

    Vec pooled(d_pool, -std::numeric_limits<double>::infinity());
    Vec pre(d_pool);
    for (const auto& h : neighbor_vecs) {
        if (h.size() != d_prev) throw DataError("neighbor vector dimension mismatch");
        matvec(layer.w_pool, h.data(), pre.data());
        for (std::size_t c = 0; c < d_pool; ++c) {
            double act = std::max(0.0, pre[c] + layer.b_pool[c]);
            pooled[c] = std::max(pooled[c], act);
        }
    }
    return pooled;
}

// ---------------------------------------------------------------------------
// tree forward / backward

struct TreeEval {
    // indexed [k-1][l] for steps k = 1..K
    std::vector<std::vector<Mat>> pool_pre;
    std::vector<std::vector<Mat>> pooled;
    std::vector<std::vector<std::vector<int>>> argmax;
    std::vector<std::vector<Mat>> comb_pre;
    std::vector<std::vector<Vec>> norms;
    std::vector<std::vector<Mat>> h; // h[k][l], k = 0..K
};

namespace {

void tree_forward(const Mat& features, const AggregatorParams& params, const SampledTree& tree,
                  TreeEval& ev, double* kink_margin) {
    const int K = params.depth();
    if (tree.depth() != K) throw DataError("sampled tree depth does not match parameter depth");
    if (static_cast<int>(features.cols) != params.input_dim())
        throw DataError("feature dimension does not match aggregator input");

    double margin = std::numeric_limits<double>::infinity();

    ev.h.assign(K + 1, {});
    ev.pool_pre.assign(K, {});
    ev.pooled.assign(K, {});
    ev.argmax.assign(K, {});
    ev.comb_pre.assign(K, {});
    ev.norms.assign(K, {});

    // depth-0 values: raw features, zero rows for sentinels
    ev.h[0].resize(K + 1);
    for (int l = 0; l <= K; ++l) {
        const auto& nodes = tree.layer_nodes[l];
        Mat m(nodes.size(), features.cols);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i] == kNoNode) continue;
            if (nodes[i] < 0 || nodes[i] >= static_cast<int>(features.rows))
                throw DataError("tree references node outside the feature matrix");
            std::copy_n(features.row(nodes[i]), features.cols, m.row(i));
        }
        ev.h[0][l] = std::move(m);
    }

    for (int k = 1; k <= K; ++k) {
        const auto& layer = params.layers[k - 1];
        const int d_prev = params.dim_at(k - 1);
        const int d_out = params.dim_at(k);
        const int d_pool = static_cast<int>(layer.w_pool.rows);
        const int top_layer = K - k;

        ev.h[k].resize(top_layer + 1);
        ev.pool_pre[k - 1].resize(top_layer + 1);
        ev.pooled[k - 1].resize(top_layer + 1);
        ev.argmax[k - 1].resize(top_layer + 1);
        ev.comb_pre[k - 1].resize(top_layer + 1);
        ev.norms[k - 1].resize(top_layer + 1);

        for (int l = 0; l <= top_layer; ++l) {
            const auto& parents = tree.layer_nodes[l];
            const auto& children = tree.layer_nodes[l + 1];
            const auto& offsets = tree.child_offsets[l];
            const Mat& h_prev_self = ev.h[k - 1][l];
            const Mat& h_prev_child = ev.h[k - 1][l + 1];

            Mat pool_pre(children.size(), d_pool);
            for (std::size_t j = 0; j < children.size(); ++j) {
                double* row = pool_pre.row(j);
                matvec(layer.w_pool, h_prev_child.row(j), row);
                for (int c = 0; c < d_pool; ++c) {
                    row[c] += layer.b_pool[c];
                    margin = std::min(margin, std::abs(row[c]));
                }
            }

            Mat pooled(parents.size(), d_pool);
            std::vector<int> argmax(parents.size() * d_pool, -1);
            for (std::size_t i = 0; i < parents.size(); ++i) {
                const int begin = offsets[i], end = offsets[i + 1];
                for (int c = 0; c < d_pool; ++c) {
                    double best = -1.0;
                    int best_j = -1;
                    for (int j = begin; j < end; ++j) {
                        double act = std::max(0.0, pool_pre.at(j, c));
                        if (best_j < 0 || act > best) {
                            best = act;
                            best_j = j;
                        }
                    }
                    pooled.at(i, c) = best;
                    argmax[i * d_pool + c] = best_j;
                    // margin to the best strictly-smaller child value;
                    // bit-equal duplicates (repeated samples, sentinels)
                    // keep the max smooth and impose no constraint
                    double runner = -std::numeric_limits<double>::infinity();
                    for (int j = begin; j < end; ++j) {
                        double act = std::max(0.0, pool_pre.at(j, c));
                        if (act < best && act > runner) runner = act;
                    }
                    if (std::isfinite(runner)) margin = std::min(margin, best - runner);
                }
            }

            Mat comb_pre(parents.size(), d_out);
            Vec norms(parents.size(), 0.0);
            Mat h_next(parents.size(), d_out);
            Vec concat(d_prev + d_pool);
            for (std::size_t i = 0; i < parents.size(); ++i) {
                std::copy_n(h_prev_self.row(i), d_prev, concat.begin());
                std::copy_n(pooled.row(i), d_pool, concat.begin() + d_prev);
                double* pre = comb_pre.row(i);
                matvec(layer.w_combine, concat.data(), pre);
                double* out = h_next.row(i);
                double sq = 0.0;
                for (int c = 0; c < d_out; ++c) {
                    margin = std::min(margin, std::abs(pre[c]));
                    out[c] = std::max(0.0, pre[c]);
                    sq += out[c] * out[c];
                }
                double norm = std::sqrt(sq);
                norms[i] = norm;
                if (norm > 0.0)
                    for (int c = 0; c < d_out; ++c) out[c] /= norm;
            }

            ev.pool_pre[k - 1][l] = std::move(pool_pre);
            ev.pooled[k - 1][l] = std::move(pooled);
            ev.argmax[k - 1][l] = std::move(argmax);
            ev.comb_pre[k - 1][l] = std::move(comb_pre);
            ev.norms[k - 1][l] = std::move(norms);
            ev.h[k][l] = std::move(h_next);
        }
    }
    if (kink_margin) *kink_margin = std::min(*kink_margin, margin);
}

void tree_backward(const AggregatorParams& params, const SampledTree& tree, const TreeEval& ev,
                   const double* dz, AggregatorParams& grads) {
    const int K = params.depth();

    std::vector<Mat> g_cur(1);
    g_cur[0] = Mat(1, params.dim_at(K));
    std::copy_n(dz, params.dim_at(K), g_cur[0].row(0));

    for (int k = K; k >= 1; --k) {
        const auto& layer = params.layers[k - 1];
        auto& glayer = grads.layers[k - 1];
        const int d_prev = params.dim_at(k - 1);
        const int d_out = params.dim_at(k);
        const int d_pool = static_cast<int>(layer.w_pool.rows);
        const int top_layer = K - k;

        std::vector<Mat> g_prev(top_layer + 2);
        for (int l = 0; l <= top_layer + 1; ++l)
            g_prev[l] = Mat(tree.layer_nodes[l].size(), d_prev);

        Vec ga(d_out), gpre(d_out), concat(d_prev + d_pool), gconcat(d_prev + d_pool), gp(d_pool);

        for (int l = 0; l <= top_layer; ++l) {
            const auto& parents = tree.layer_nodes[l];
            const auto& children = tree.layer_nodes[l + 1];
            const Mat& pool_pre = ev.pool_pre[k - 1][l];
            const Mat& pooled = ev.pooled[k - 1][l];
            const auto& argmax = ev.argmax[k - 1][l];
            const Mat& comb_pre = ev.comb_pre[k - 1][l];
            const Vec& norms = ev.norms[k - 1][l];
            const Mat& h_out = ev.h[k][l];
            const Mat& h_prev_self = ev.h[k - 1][l];
            const Mat& h_prev_child = ev.h[k - 1][l + 1];

            Mat g_poolact(children.size(), d_pool);

            for (std::size_t i = 0; i < parents.size(); ++i) {
                const double* g = g_cur[l].row(i);
                const double* h_row = h_out.row(i);
                const double norm = norms[i];
                if (norm > 0.0) {
                    double proj = dot(h_row, g, d_out);
                    for (int c = 0; c < d_out; ++c) ga[c] = (g[c] - h_row[c] * proj) / norm;
                } else {
                    std::copy_n(g, d_out, ga.begin());
                }
                const double* pre = comb_pre.row(i);
                for (int c = 0; c < d_out; ++c) gpre[c] = pre[c] > 0.0 ? ga[c] : 0.0;

                std::copy_n(h_prev_self.row(i), d_prev, concat.begin());
                std::copy_n(pooled.row(i), d_pool, concat.begin() + d_prev);
                outer_add(glayer.w_combine, gpre.data(), concat.data());

                std::fill(gconcat.begin(), gconcat.end(), 0.0);
                matvec_t_add(layer.w_combine, gpre.data(), gconcat.data());
                double* gself = g_prev[l].row(i);
                for (int c = 0; c < d_prev; ++c) gself[c] += gconcat[c];
                for (int c = 0; c < d_pool; ++c) {
                    int j = argmax[i * d_pool + c];
                    if (j >= 0) g_poolact.at(j, c) += gconcat[d_prev + c];
                }
            }

            for (std::size_t j = 0; j < children.size(); ++j) {
                const double* pre = pool_pre.row(j);
                const double* gact = g_poolact.row(j);
                bool any = false;
                for (int c = 0; c < d_pool; ++c) {
                    gp[c] = pre[c] > 0.0 ? gact[c] : 0.0;
                    any = any || gp[c] != 0.0;
                }
                if (!any) continue;
                outer_add(glayer.w_pool, gp.data(), h_prev_child.row(j));
                for (int c = 0; c < d_pool; ++c) glayer.b_pool[c] += gp[c];
                matvec_t_add(layer.w_pool, gp.data(), g_prev[l + 1].row(j));
            }
        }
        g_cur = std::move(g_prev);
    }
}

} // namespace

Vec embed_tree(const Mat& features, const AggregatorParams& params, const SampledTree& tree,
               double* kink_margin) {
    TreeEval ev;
    tree_forward(features, params, tree, ev, kink_margin);
    const Mat& top = ev.h[params.depth()][0];
    return Vec(top.row(0), top.row(0) + top.cols);
}

Mat embed_forward(const CircuitGraph& graph, const Mat& features, const AggregatorParams& params,
                  const SamplerConfig& config, const std::vector<int>& nodes, int jobs) {
    NeighborIndex index = build_neighbor_index(graph, config.undirected);
    Mat out(nodes.size(), params.output_dim());
    const std::uint64_t base = derive_seed(config.seed, "embed-forward");

#ifdef _OPENMP
    int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
#endif
    for (long long i = 0; i < static_cast<long long>(nodes.size()); ++i) {
        SplitMix64 rng(mix_seed(base, static_cast<std::uint64_t>(nodes[i])));
        SampledTree tree = sample_tree(index, nodes[i], config, rng);
        Vec z = embed_tree(features, params, tree);
        std::copy(z.begin(), z.end(), out.row(i));
    }
    return out;
}

double sage_loss_and_grad(const Mat& features, const AggregatorParams& params,
                          const SageBatch& batch, AggregatorParams* grads,
                          double* kink_margin) {
    if (batch.pairs.empty()) throw DataError("training batch has no positive pairs");
    if (batch.negatives.size() != batch.pairs.size())
        throw DataError("negatives list must match pair list");

    // nodes that actually need an embedding
    std::vector<int> needed;
    for (std::size_t p = 0; p < batch.pairs.size(); ++p) {
        needed.push_back(batch.pairs[p].first);
        needed.push_back(batch.pairs[p].second);
        for (int n : batch.negatives[p]) needed.push_back(n);
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

    const int d_emb = params.output_dim();
    std::unordered_map<int, int> slot;
    slot.reserve(needed.size());
    for (std::size_t i = 0; i < needed.size(); ++i) slot[needed[i]] = static_cast<int>(i);

    double margin = std::numeric_limits<double>::infinity();
    Mat z(needed.size(), d_emb);
    for (std::size_t i = 0; i < needed.size(); ++i) {
        int v = needed[i];
        if (v < 0 || v >= static_cast<int>(batch.trees.size()) ||
            batch.trees[v].layer_nodes.empty())
            throw DataError("batch is missing a sampled tree for node " + std::to_string(v));
        Vec zv = embed_tree(features, params, batch.trees[v], &margin);
        std::copy(zv.begin(), zv.end(), z.row(i));
    }

    double loss = 0.0;
    Mat gz(needed.size(), d_emb);
    for (std::size_t p = 0; p < batch.pairs.size(); ++p) {
        const int sv = slot.at(batch.pairs[p].first);
        const int su = slot.at(batch.pairs[p].second);
        const double* zv = z.row(sv);
        const double* zu = z.row(su);
        double s = dot(zv, zu, d_emb);
        loss += softplus(-s);
        double c = stable_sigmoid(s) - 1.0;
        for (int d = 0; d < d_emb; ++d) {
            gz.at(sv, d) += c * zu[d];
            gz.at(su, d) += c * zv[d];
        }
        for (int n : batch.negatives[p]) {
            const int sn = slot.at(n);
            const double* zn = z.row(sn);
            double s2 = dot(zv, zn, d_emb);
            loss += softplus(s2);
            double c2 = stable_sigmoid(s2);
            for (int d = 0; d < d_emb; ++d) {
                gz.at(sv, d) += c2 * zn[d];
                gz.at(sn, d) += c2 * zv[d];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.pairs.size());
    loss *= inv;

    if (grads) {
        for (auto& g : gz.data) g *= inv;
        grads->fill(0.0);
        TreeEval ev;
        for (std::size_t i = 0; i < needed.size(); ++i) {
            tree_forward(features, params, batch.trees[needed[i]], ev, nullptr);
            tree_backward(params, batch.trees[needed[i]], ev, gz.row(i), *grads);
        }
    }
    if (kink_margin) *kink_margin = margin;
    return loss;
}

std::vector<std::pair<int, int>> walk_pairs(const NeighborIndex& index, int walk_length,
                                            int walks_per_node, int window, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> walk;
    for (int v = 0; v < static_cast<int>(index.adj.size()); ++v) {
        for (int w = 0; w < walks_per_node; ++w) {
            walk.clear();
            walk.push_back(v);
            int cur = v;
            for (int step = 1; step < walk_length; ++step) {
                const auto& nbrs = index.adj[cur];
                if (nbrs.empty()) break;
                cur = nbrs[rng.uniform_below(nbrs.size())];
                walk.push_back(cur);
            }
            for (std::size_t i = 0; i < walk.size(); ++i)
                for (int d = 1; d <= window && i + d < walk.size(); ++d) {
                    if (walk[i] == walk[i + d]) continue;
                    pairs.emplace_back(walk[i], walk[i + d]);
                    pairs.emplace_back(walk[i + d], walk[i]);
                }
        }
    }
    return pairs;
}

SageTrainResult unsupervised_train(const CircuitGraph& graph, const Mat& features,
                                   const SamplerConfig& sampler, const SageTrainConfig& config) {
    const int V = static_cast<int>(graph.nodes.size());
    if (V < 2) throw DataError("unsupervised training needs at least two nodes");
    if (config.epochs < 1) throw DataError("training needs at least one epoch");

    NeighborIndex index = build_neighbor_index(graph, sampler.undirected);
    auto pairs = walk_pairs(index, config.walk_length, config.walks_per_node, config.window,
                            derive_seed(config.seed, "walks"));
    if (pairs.empty())
        throw DataError("random walks produced no co-occurrence pairs (graph has no edges?)");

    std::vector<int> out_dims;
    for (int k = 1; k < sampler.depth; ++k) out_dims.push_back(config.d_hidden);
    out_dims.push_back(config.d_emb);
    AggregatorParams params = init_aggregator_params(static_cast<int>(features.cols), config.d_pool,
                                                     out_dims, derive_seed(config.seed, "sage-init"));

    const std::uint64_t tree_base = derive_seed(config.seed, "trees");
    const std::uint64_t neg_base = derive_seed(config.seed, "negatives");

    auto build_batch = [&](int epoch) {
        SageBatch batch;
        batch.trees.resize(V);
        for (int v = 0; v < V; ++v) {
            SplitMix64 rng(mix_seed(mix_seed(tree_base, static_cast<std::uint64_t>(epoch)),
                                    static_cast<std::uint64_t>(v)));
            batch.trees[v] = sample_tree(index, v, sampler, rng);
        }
        batch.pairs = pairs;
        batch.negatives.resize(pairs.size());
        SplitMix64 rng(mix_seed(neg_base, static_cast<std::uint64_t>(epoch)));
        for (auto& negs : batch.negatives) {
            negs.resize(config.negatives);
            for (auto& n : negs) n = static_cast<int>(rng.uniform_below(V));
        }
        return batch;
    };

    SageTrainResult result;
    {
        SageBatch batch0 = build_batch(0);
        double loss0 = sage_loss_and_grad(features, params, batch0, nullptr);
        if (!std::isfinite(loss0)) throw NumericError("non-finite embedding loss", 0);
        result.loss_history.push_back(loss0);
    }

    AggregatorParams grads = params; // same shape
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        SageBatch batch = build_batch(epoch);
        double loss = sage_loss_and_grad(features, params, batch, &grads);
        if (!std::isfinite(loss)) throw NumericError("non-finite embedding loss", epoch);
        result.loss_history.push_back(loss);
        params.add_scaled(grads, -config.lr);
    }
    result.params = std::move(params);
    return result;
}

// ---------------------------------------------------------------------------
// persistence

namespace {

json mat_to_json(const Mat& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Mat mat_from_json(const json& j) {
    Mat m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.data.size()) throw DataError("matrix data length mismatch in JSON");
    m.data = std::move(data);
    return m;
}

} // namespace

std::string sage_params_to_json(const AggregatorParams& params, const SamplerConfig& sampler) {
    json j;
    j["format_version"] = 1;
    j["sampler"] = {{"depth", sampler.depth},
                    {"fanouts", sampler.fanouts},
                    {"seed", sampler.seed},
                    {"undirected", sampler.undirected},
                    {"full_neighborhood", sampler.full_neighborhood}};
    json layers = json::array();
    for (const auto& layer : params.layers)
        layers.push_back({{"w_pool", mat_to_json(layer.w_pool)},
                          {"b_pool", layer.b_pool},
                          {"w_combine", mat_to_json(layer.w_combine)}});
    j["layers"] = layers;
    return j.dump(2) + "\n";
}

std::pair<AggregatorParams, SamplerConfig> sage_params_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("params JSON: ") + e.what());
    }
    if (j.value("format_version", 0) != 1) throw DataError("unsupported params format_version");
    SamplerConfig sampler;
    const auto& s = j.at("sampler");
    sampler.depth = s.at("depth").get<int>();
    sampler.fanouts = s.at("fanouts").get<std::vector<int>>();
    sampler.seed = s.at("seed").get<std::uint64_t>();
    sampler.undirected = s.at("undirected").get<bool>();
    sampler.full_neighborhood = s.at("full_neighborhood").get<bool>();

    AggregatorParams params;
    for (const auto& layer : j.at("layers")) {
        AggregatorLayer al;
        al.w_pool = mat_from_json(layer.at("w_pool"));
        al.b_pool = layer.at("b_pool").get<Vec>();
        al.w_combine = mat_from_json(layer.at("w_combine"));
        if (al.b_pool.size() != al.w_pool.rows) throw DataError("pool bias length mismatch");
        if (al.w_combine.cols != al.w_pool.cols + al.w_pool.rows)
            throw DataError("combine width does not chain with pool dims");
        params.layers.push_back(std::move(al));
    }
    if (params.layers.empty()) throw DataError("params JSON has no layers");
    if (static_cast<int>(params.layers.size()) != sampler.depth)
        throw DataError("layer count does not match sampler depth");
    return {std::move(params), std::move(sampler)};
}

std::string embeddings_to_csv(const std::vector<std::string>& names, const Mat& embeddings) {
    if (names.size() != embeddings.rows) throw DataError("name/embedding row count mismatch");
    std::string out = "node_name";
    for (std::size_t c = 0; c < embeddings.cols; ++c) out += ",e" + std::to_string(c);
    out += '\n';
    for (std::size_t r = 0; r < embeddings.rows; ++r) {
        out += names[r];
        for (std::size_t c = 0; c < embeddings.cols; ++c) out += ',' + fmt_double(embeddings.at(r, c));
        out += '\n';
    }
    return out;
}

std::pair<std::vector<std::string>, Mat> embeddings_from_csv(const std::string& text) {
    std::vector<std::string> names;
    std::vector<Vec> rows;
    std::size_t pos = 0;
    int line_no = 0;
    std::size_t width = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (line_no == 1) {
            if (fields.empty() || fields[0] != "node_name")
                throw ParseError("bad embeddings CSV header", 1);
            width = fields.size() - 1;
            continue;
        }
        if (fields.size() != width + 1)
            throw ParseError("embeddings CSV row width mismatch", line_no);
        names.push_back(fields[0]);
        Vec row(width);
        for (std::size_t i = 0; i < width; ++i) row[i] = parse_double(fields[i + 1], line_no);
        rows.push_back(std::move(row));
    }
    Mat m(rows.size(), width);
    for (std::size_t r = 0; r < rows.size(); ++r)
        std::copy(rows[r].begin(), rows[r].end(), m.row(r));
    return {std::move(names), std::move(m)};
}

} // namespace ffr
