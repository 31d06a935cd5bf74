#include "ffr/pipeline.hpp"

#include <chrono>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ffr/error.hpp"
#include "ffr/gml.hpp"
#include "ffr/rng.hpp"
#include "ffr/textio.hpp"

namespace ffr {

using nlohmann::json;

PipelineConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw DataError("config JSON root must be an object");
    PipelineConfig c;
    c.netlist_path = j.value("netlist", c.netlist_path);
    c.stimulus_path = j.value("stimulus", c.stimulus_path);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    c.cycles = j.value("cycles", c.cycles);
    if (j.contains("fit")) {
        const auto& f = j["fit"];
        c.fit_default = f.value("default", c.fit_default);
        if (f.contains("overrides"))
            for (auto it = f["overrides"].begin(); it != f["overrides"].end(); ++it)
                c.fit_overrides[it.key()] = it.value().get<double>();
    }
    if (j.contains("sampler")) {
        const auto& s = j["sampler"];
        c.sampler.depth = s.value("depth", c.sampler.depth);
        if (s.contains("fanouts")) c.sampler.fanouts = s["fanouts"].get<std::vector<int>>();
        c.sampler.undirected = s.value("undirected", c.sampler.undirected);
        c.sampler.full_neighborhood = s.value("full_neighborhood", c.sampler.full_neighborhood);
    }
    if (j.contains("embed")) {
        const auto& e = j["embed"];
        c.embed.epochs = e.value("epochs", c.embed.epochs);
        c.embed.lr = e.value("lr", c.embed.lr);
        c.embed.walk_length = e.value("walk_length", c.embed.walk_length);
        c.embed.walks_per_node = e.value("walks_per_node", c.embed.walks_per_node);
        c.embed.window = e.value("window", c.embed.window);
        c.embed.negatives = e.value("negatives", c.embed.negatives);
        c.embed.d_pool = e.value("d_pool", c.embed.d_pool);
        c.embed.d_hidden = e.value("d_hidden", c.embed.d_hidden);
        c.embed.d_emb = e.value("d_emb", c.embed.d_emb);
    }
    if (j.contains("train")) {
        const auto& t = j["train"];
        c.train.lr = t.value("lr", c.train.lr);
        c.train.epochs = t.value("epochs", c.train.epochs);
        c.train.batch_size = t.value("batch_size", c.train.batch_size);
        c.train.momentum = t.value("momentum", c.train.momentum);
        c.train.train_fraction = t.value("train_fraction", c.train.train_fraction);
    }
    if (j.contains("metrics_fold")) {
        std::string fold = j["metrics_fold"].get<std::string>();
        if (fold == "train")
            c.metrics_fold = Fold::Train;
        else if (fold == "test")
            c.metrics_fold = Fold::Test;
        else
            throw DataError("metrics_fold must be 'train' or 'test'");
    }
    return c;
}

namespace {

namespace fs = std::filesystem;

Netlist load_netlist(const PipelineConfig& config) {
    if (config.netlist_path.empty()) throw DataError("no netlist path configured");
    return parse_bench(read_file(config.netlist_path));
}

/// Loads the stimulus file or generates seeded-random vectors; generated
/// vectors are echoed to out_dir/stimulus.json so a campaign is always
/// reproducible from its artifacts.
Stimulus load_or_generate_stimulus(const PipelineConfig& config, const Netlist& netlist) {
    if (!config.stimulus_path.empty()) return stimulus_from_json(read_file(config.stimulus_path));
    if (config.cycles < 1) throw DataError("cycles must be >= 1 to generate a stimulus");
    Stimulus s = random_stimulus(netlist, static_cast<std::size_t>(config.cycles),
                                 derive_seed(config.seed, "stimulus"));
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / kStimulusFile, stimulus_to_json(s));
    return s;
}

SamplerConfig seeded_sampler(const PipelineConfig& config) {
    SamplerConfig s = config.sampler;
    s.seed = derive_seed(config.seed, "sampler");
    return s;
}

} // namespace

std::string features_to_csv(const CircuitGraph& graph, const FeatureMatrix& features) {
    std::string out = "node_name";
    for (int k = 0; k < kGateKindCount; ++k) {
        out += ",k_";
        for (const char* p = to_string(static_cast<GateKind>(k)); *p; ++p)
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(*p)));
    }
    out += ",in_degree,out_degree,level,is_seq\n";
    for (std::size_t r = 0; r < features.rows; ++r) {
        out += graph.nodes[r].name;
        for (std::size_t c = 0; c < features.cols; ++c) out += ',' + fmt_double(features.at(r, c));
        out += '\n';
    }
    return out;
}

void run_parse_stage(const PipelineConfig& config) {
    Netlist netlist = load_netlist(config);
    CircuitGraph graph = build_graph(netlist);
    FeatureMatrix features = node_features(graph);
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / kGraphFile, export_gml(graph));
    write_file(fs::path(config.out_dir) / kFeaturesFile, features_to_csv(graph, features));
}

CampaignResult run_campaign_stage(const PipelineConfig& config) {
    Netlist netlist = load_netlist(config);
    Stimulus stimulus = load_or_generate_stimulus(config, netlist);
    CampaignOptions options;
    options.jobs = config.jobs;
    CampaignResult result =
        run_campaign(netlist, stimulus, config.fit_overrides, config.fit_default, options);
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / kCampaignFile, campaign_to_csv(result));
    return result;
}

SageTrainResult run_embed_stage(const PipelineConfig& config) {
    Netlist netlist = load_netlist(config);
    CircuitGraph graph = build_graph(netlist);
    FeatureMatrix features = node_features(graph);

    SamplerConfig sampler = seeded_sampler(config);
    SageTrainConfig embed_cfg = config.embed;
    embed_cfg.seed = derive_seed(config.seed, "embed");

    SageTrainResult trained = unsupervised_train(graph, features, sampler, embed_cfg);

    std::vector<int> all_nodes(graph.nodes.size());
    for (std::size_t i = 0; i < all_nodes.size(); ++i) all_nodes[i] = static_cast<int>(i);
    Mat embeddings = embed_forward(graph, features, trained.params, sampler, all_nodes, config.jobs);

    std::vector<std::string> names;
    names.reserve(graph.nodes.size());
    for (const auto& node : graph.nodes) names.push_back(node.name);

    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / kEmbeddingsFile, embeddings_to_csv(names, embeddings));
    write_file(fs::path(config.out_dir) / kSageParamsFile,
               sage_params_to_json(trained.params, sampler));
    return trained;
}

MlpTrainResult run_train_stage(const PipelineConfig& config) {
    auto [names, embeddings] =
        embeddings_from_csv(read_file(fs::path(config.out_dir) / kEmbeddingsFile));
    CampaignResult campaign = campaign_from_csv(read_file(fs::path(config.out_dir) / kCampaignFile));
    if (campaign.per_ff.empty()) throw DataError("campaign CSV has no flip-flop rows");

    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < names.size(); ++i) row_of[names[i]] = i;

    Dataset dataset;
    for (const auto& ff : campaign.per_ff) {
        auto it = row_of.find(ff.name);
        if (it == row_of.end())
            throw DataError("no embedding for flip-flop '" + ff.name + "'");
        DataRow row;
        row.name = ff.name;
        row.embedding.assign(embeddings.row(it->second), embeddings.row(it->second) + embeddings.cols);
        row.target = ff.ffr;
        dataset.rows.push_back(std::move(row));
    }

    split_dataset(dataset, config.train.train_fraction, derive_seed(config.seed, "split"));

    TrainConfig train_cfg = config.train;
    train_cfg.seed = derive_seed(config.seed, "mlp");
    MlpTrainResult trained = train_mlp(dataset, train_cfg);

    write_file(fs::path(config.out_dir) / kDatasetFile, dataset_to_csv(dataset));
    write_file(fs::path(config.out_dir) / kModelFile, mlp_params_to_json(trained.params, train_cfg));
    return trained;
}

PredictionReport run_predict_stage(const PipelineConfig& config,
                                   const std::optional<StageTimes>& times) {
    auto [params, train_cfg] = mlp_params_from_json(read_file(fs::path(config.out_dir) / kModelFile));
    (void)train_cfg;
    Dataset dataset = dataset_from_csv(read_file(fs::path(config.out_dir) / kDatasetFile));
    if (dataset.rows.empty()) throw DataError("dataset CSV has no rows");

    std::vector<double> predictions = mlp_predict(params, dataset);
    std::vector<ReportRow> rows;
    rows.reserve(dataset.rows.size());
    for (std::size_t i = 0; i < dataset.rows.size(); ++i)
        rows.push_back({dataset.rows[i].name, dataset.rows[i].fold, dataset.rows[i].target,
                        predictions[i]});

    PredictionReport report = make_report(std::move(rows), config.metrics_fold);
    if (times) report.times = *times;
    emit_report(report, config.out_dir);
    return report;
}

PipelineOutcome run_pipeline(const PipelineConfig& config) {
    using clock = std::chrono::steady_clock;
    auto seconds_since = [](clock::time_point start) {
        return std::chrono::duration<double>(clock::now() - start).count();
    };

    PipelineOutcome outcome;

    auto t0 = clock::now();
    run_parse_stage(config);
    outcome.times.parse = seconds_since(t0);

    t0 = clock::now();
    run_campaign_stage(config);
    outcome.times.campaign = seconds_since(t0);

    t0 = clock::now();
    outcome.embed = run_embed_stage(config);
    outcome.times.embed = seconds_since(t0);

    t0 = clock::now();
    outcome.train = run_train_stage(config);
    outcome.times.train = seconds_since(t0);

    t0 = clock::now();
    outcome.report = run_predict_stage(config, std::nullopt);
    outcome.times.predict = seconds_since(t0);

    outcome.report.times = outcome.times;
    emit_report(outcome.report, config.out_dir);
    return outcome;
}

} // namespace ffr
