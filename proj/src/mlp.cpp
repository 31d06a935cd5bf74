#include "ffr/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "ffr/error.hpp"
#include "ffr/rng.hpp"
#include "ffr/textio.hpp"

namespace ffr {

using nlohmann::json;

const char* to_string(Fold fold) { return fold == Fold::Train ? "train" : "test"; }

MlpParams init_mlp_params(int d_in, const std::vector<int>& hidden_widths, std::uint64_t seed) {
    if (d_in < 1) throw DataError("regressor input dimension must be positive");
    SplitMix64 rng(seed);
    MlpParams params;
    std::vector<int> widths = hidden_widths;
    widths.push_back(1);
    int prev = d_in;
    for (int w : widths) {
        if (w < 1) throw DataError("layer width must be positive");
        DenseLayer layer;
        layer.w = Mat(w, prev);
        layer.b.assign(w, 0.0);
        double lim = std::sqrt(6.0 / (prev + w));
        for (auto& x : layer.w.data) x = rng.uniform(-lim, lim);
        params.layers.push_back(std::move(layer));
        prev = w;
    }
    return params;
}

Vec mlp_params_to_flat(const MlpParams& params) {
    Vec flat;
    for (const auto& layer : params.layers) {
        flat.insert(flat.end(), layer.w.data.begin(), layer.w.data.end());
        flat.insert(flat.end(), layer.b.begin(), layer.b.end());
    }
    return flat;
}

void mlp_params_from_flat(MlpParams& params, const Vec& flat) {
    std::size_t pos = 0;
    for (auto& layer : params.layers) {
        std::copy_n(flat.begin() + pos, layer.w.data.size(), layer.w.data.begin());
        pos += layer.w.data.size();
        std::copy_n(flat.begin() + pos, layer.b.size(), layer.b.begin());
        pos += layer.b.size();
    }
    if (pos != flat.size()) throw DataError("flat parameter vector has wrong length");
}

namespace {

struct ForwardCache {
    std::vector<Vec> activations; // activations[0] = input, per layer post-activation
    std::vector<Vec> pre;         // per layer pre-activation
    double output = 0.0;
};

double forward_impl(const MlpParams& params, const double* x, std::size_t dim,
                    ForwardCache* cache, double* kink_margin) {
    if (dim != static_cast<std::size_t>(params.input_dim()))
        throw DataError("input dimension does not match regressor");
    Vec a(x, x + dim);
    if (cache) {
        cache->activations.clear();
        cache->pre.clear();
        cache->activations.push_back(a);
    }
    const std::size_t L = params.layers.size();
    for (std::size_t l = 0; l < L; ++l) {
        const auto& layer = params.layers[l];
        Vec z(layer.w.rows);
        matvec(layer.w, a.data(), z.data());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += layer.b[i];
        if (cache) cache->pre.push_back(z);
        if (l + 1 == L) {
            double out = logistic(z[0]);
            if (cache) {
                cache->activations.push_back({out});
                cache->output = out;
            }
            return out;
        }
        a.resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (kink_margin) *kink_margin = std::min(*kink_margin, std::abs(z[i]));
            a[i] = std::max(0.0, z[i]);
        }
        if (cache) cache->activations.push_back(a);
    }
    return 0.0; // unreachable: layers is never empty
}

/// Backprop of d(loss)/d(output) through the cached forward pass.
void backward_impl(const MlpParams& params, const ForwardCache& cache, double d_out,
                   MlpParams& grads) {
    const std::size_t L = params.layers.size();
    // output layer: logistic
    double p = cache.output;
    Vec delta{d_out * p * (1.0 - p)};
    for (std::size_t l = L; l-- > 0;) {
        const auto& layer = params.layers[l];
        auto& glayer = grads.layers[l];
        const Vec& input = cache.activations[l];
        outer_add(glayer.w, delta.data(), input.data());
        for (std::size_t i = 0; i < delta.size(); ++i) glayer.b[i] += delta[i];
        if (l == 0) break;
        Vec prev(input.size(), 0.0);
        matvec_t_add(layer.w, delta.data(), prev.data());
        const Vec& pre_prev = cache.pre[l - 1];
        for (std::size_t i = 0; i < prev.size(); ++i)
            if (pre_prev[i] <= 0.0) prev[i] = 0.0;
        delta = std::move(prev);
    }
}

void zero_like(const MlpParams& params, MlpParams& grads) {
    grads.layers.resize(params.layers.size());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        grads.layers[l].w = Mat(params.layers[l].w.rows, params.layers[l].w.cols);
        grads.layers[l].b.assign(params.layers[l].b.size(), 0.0);
    }
}

} // namespace

double mlp_forward(const MlpParams& params, const double* x, std::size_t dim) {
    return forward_impl(params, x, dim, nullptr, nullptr);
}

double mlp_loss_and_grad(const MlpParams& params, const Mat& inputs, const Vec& targets,
                         MlpParams* grads, double* kink_margin) {
    if (inputs.rows == 0 || inputs.rows != targets.size())
        throw DataError("batch inputs and targets must align and be non-empty");
    if (grads) zero_like(params, *grads);

    const double inv = 1.0 / static_cast<double>(inputs.rows);
    double loss = 0.0;
    ForwardCache cache;
    for (std::size_t r = 0; r < inputs.rows; ++r) {
        double p = forward_impl(params, inputs.row(r), inputs.cols, grads ? &cache : nullptr,
                                kink_margin);
        double err = p - targets[r];
        loss += err * err;
        if (grads) backward_impl(params, cache, 2.0 * err * inv, *grads);
    }
    return loss * inv;
}

void split_dataset(Dataset& dataset, double train_fraction, std::uint64_t seed) {
    const std::size_t n = dataset.rows.size();
    if (n < 2) throw DataError("dataset split needs at least two rows");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DataError("train fraction must lie strictly between 0 and 1");
    std::size_t n_train =
        static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n)
        throw DataError("degenerate split: both folds need at least one row");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    SplitMix64 rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng.uniform_below(i)]);

    for (std::size_t i = 0; i < n; ++i)
        dataset.rows[order[i]].fold = i < n_train ? Fold::Train : Fold::Test;
}

MlpTrainResult train_mlp(const Dataset& dataset, const TrainConfig& config) {
    if (config.lr <= 0.0) throw DataError("learning rate must be positive");
    if (config.batch_size < 1) throw DataError("batch size must be >= 1");
    std::vector<std::size_t> train_rows;
    for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
        const auto& row = dataset.rows[i];
        if (!(row.target >= 0.0 && row.target <= 1.0))
            throw DataError("target of '" + row.name + "' is outside [0,1]");
        if (row.fold == Fold::Train) train_rows.push_back(i);
    }
    if (train_rows.empty()) throw DataError("training fold is empty");
    const std::size_t dim = dataset.rows[train_rows[0]].embedding.size();

    MlpTrainResult result;
    result.params = init_mlp_params(static_cast<int>(dim), kDefaultHiddenWidths,
                                    derive_seed(config.seed, "mlp-init"));
    result.grad_contributions.assign(dataset.rows.size(), 0);

    MlpParams velocity, grads;
    zero_like(result.params, velocity);
    zero_like(result.params, grads);

    auto fold_mse = [&](const MlpParams& p) {
        double acc = 0.0;
        for (std::size_t i : train_rows) {
            const auto& row = dataset.rows[i];
            double err = mlp_forward(p, row.embedding.data(), row.embedding.size()) - row.target;
            acc += err * err;
        }
        return acc / static_cast<double>(train_rows.size());
    };

    result.loss_history.push_back(fold_mse(result.params));
    if (!std::isfinite(result.loss_history.back()))
        throw NumericError("non-finite training loss", 0);

    std::vector<std::size_t> order = train_rows;
    Mat batch_x;
    Vec batch_t;
    const std::uint64_t shuffle_base = derive_seed(config.seed, "mlp-shuffle");

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        SplitMix64 rng(shuffle_base + static_cast<std::uint64_t>(epoch));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_below(i)]);

        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            batch_x = Mat(end - start, dim);
            batch_t.resize(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const auto& row = dataset.rows[order[i]];
                if (row.embedding.size() != dim) throw DataError("inconsistent embedding widths");
                std::copy(row.embedding.begin(), row.embedding.end(), batch_x.row(i - start));
                batch_t[i - start] = row.target;
                ++result.grad_contributions[order[i]];
            }
            mlp_loss_and_grad(result.params, batch_x, batch_t, &grads);
            for (std::size_t l = 0; l < result.params.layers.size(); ++l) {
                auto& layer = result.params.layers[l];
                auto& vel = velocity.layers[l];
                const auto& g = grads.layers[l];
                for (std::size_t i = 0; i < layer.w.data.size(); ++i) {
                    vel.w.data[i] = config.momentum * vel.w.data[i] - config.lr * g.w.data[i];
                    layer.w.data[i] += vel.w.data[i];
                }
                for (std::size_t i = 0; i < layer.b.size(); ++i) {
                    vel.b[i] = config.momentum * vel.b[i] - config.lr * g.b[i];
                    layer.b[i] += vel.b[i];
                }
            }
        }

        double mse = fold_mse(result.params);
        if (!std::isfinite(mse)) throw NumericError("non-finite training loss", epoch);
        result.loss_history.push_back(mse);
    }
    return result;
}

std::vector<double> mlp_predict(const MlpParams& params, const Dataset& dataset) {
    std::vector<double> out(dataset.rows.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(dataset.rows.size()); ++i) {
        const auto& row = dataset.rows[i];
        out[i] = mlp_forward(params, row.embedding.data(), row.embedding.size());
    }
    return out;
}

std::string mlp_params_to_json(const MlpParams& params, const TrainConfig& config) {
    json j;
    j["format_version"] = 1;
    json layers = json::array();
    for (const auto& layer : params.layers)
        layers.push_back({{"rows", layer.w.rows},
                          {"cols", layer.w.cols},
                          {"w", layer.w.data},
                          {"b", layer.b}});
    j["layers"] = layers;
    j["train_config"] = {{"lr", config.lr},
                         {"epochs", config.epochs},
                         {"batch_size", config.batch_size},
                         {"momentum", config.momentum},
                         {"train_fraction", config.train_fraction},
                         {"seed", config.seed}};
    return j.dump(2) + "\n";
}

std::pair<MlpParams, TrainConfig> mlp_params_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    if (j.value("format_version", 0) != 1) throw DataError("unsupported model format_version");
    MlpParams params;
    for (const auto& layer : j.at("layers")) {
        DenseLayer dl;
        dl.w = Mat(layer.at("rows").get<std::size_t>(), layer.at("cols").get<std::size_t>());
        auto w = layer.at("w").get<std::vector<double>>();
        if (w.size() != dl.w.data.size()) throw DataError("layer weight length mismatch");
        dl.w.data = std::move(w);
        dl.b = layer.at("b").get<Vec>();
        if (dl.b.size() != dl.w.rows) throw DataError("layer bias length mismatch");
        params.layers.push_back(std::move(dl));
    }
    if (params.layers.empty()) throw DataError("model JSON has no layers");
    for (std::size_t l = 1; l < params.layers.size(); ++l)
        if (params.layers[l].w.cols != params.layers[l - 1].w.rows)
            throw DataError("layer dimensions do not chain");
    TrainConfig config;
    if (j.contains("train_config")) {
        const auto& t = j["train_config"];
        config.lr = t.value("lr", config.lr);
        config.epochs = t.value("epochs", config.epochs);
        config.batch_size = t.value("batch_size", config.batch_size);
        config.momentum = t.value("momentum", config.momentum);
        config.train_fraction = t.value("train_fraction", config.train_fraction);
        config.seed = t.value("seed", config.seed);
    }
    return {std::move(params), config};
}

std::string dataset_to_csv(const Dataset& dataset) {
    std::size_t dim = dataset.rows.empty() ? 0 : dataset.rows[0].embedding.size();
    std::string out = "ff_name,fold,target_ffr";
    for (std::size_t c = 0; c < dim; ++c) out += ",e" + std::to_string(c);
    out += '\n';
    for (const auto& row : dataset.rows) {
        out += row.name;
        out += ',';
        out += to_string(row.fold);
        out += ',';
        out += fmt_double(row.target);
        for (double v : row.embedding) out += ',' + fmt_double(v);
        out += '\n';
    }
    return out;
}

Dataset dataset_from_csv(const std::string& text) {
    Dataset dataset;
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
            if (fields.size() < 4 || fields[0] != "ff_name" || fields[1] != "fold" ||
                fields[2] != "target_ffr")
                throw ParseError("bad dataset CSV header", 1);
            width = fields.size() - 3;
            continue;
        }
        if (fields.size() != width + 3) throw ParseError("dataset CSV row width mismatch", line_no);
        DataRow row;
        row.name = fields[0];
        if (fields[1] == "train")
            row.fold = Fold::Train;
        else if (fields[1] == "test")
            row.fold = Fold::Test;
        else
            throw ParseError("fold must be 'train' or 'test'", line_no);
        row.target = parse_double(fields[2], line_no);
        row.embedding.resize(width);
        for (std::size_t i = 0; i < width; ++i)
            row.embedding[i] = parse_double(fields[i + 3], line_no);
        dataset.rows.push_back(std::move(row));
    }
    return dataset;
}

} // namespace ffr
