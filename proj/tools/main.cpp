#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ffr/error.hpp"
#include "ffr/gen.hpp"
#include "ffr/pipeline.hpp"
#include "ffr/textio.hpp"

namespace {

/// Flag values layered over the JSON config: only flags the user actually
/// passed override file values.
struct Overrides {
    std::optional<std::string> netlist, stimulus, out_dir, fold;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs, cycles;
    std::optional<double> fit_default;
    std::vector<std::string> fit_overrides; // name=rate

    std::optional<int> depth;
    std::optional<std::vector<int>> fanouts;
    bool fanin_only = false;
    bool full_neighborhood = false;

    std::optional<int> embed_epochs, walk_length, walks_per_node, window, negatives, d_pool,
        d_hidden, d_emb;
    std::optional<double> embed_lr;

    std::optional<double> train_lr, momentum, train_fraction;
    std::optional<int> train_epochs, batch_size;
};

void add_stage_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--netlist", o.netlist, "gate-level .bench netlist");
    cmd->add_option("--stimulus", o.stimulus, "stimulus JSON (default: seeded random vectors)");
    cmd->add_option("--cycles", o.cycles, "cycles of generated stimulus");
    cmd->add_option("--fit-default", o.fit_default, "default per-flip-flop FIT rate");
    cmd->add_option("--fit", o.fit_overrides, "per-flip-flop FIT override, name=rate")
        ->take_all();
    cmd->add_option("--depth", o.depth, "sampler depth K");
    cmd->add_option("--fanouts", o.fanouts, "sampler fanouts per depth")->delimiter(',');
    cmd->add_flag("--fanin-only", o.fanin_only, "sample fan-in neighborhoods only");
    cmd->add_flag("--full-neighborhood", o.full_neighborhood,
                  "use whole neighborhoods instead of sampling");
    cmd->add_option("--embed-epochs", o.embed_epochs, "embedding training epochs");
    cmd->add_option("--embed-lr", o.embed_lr, "embedding learning rate");
    cmd->add_option("--walk-length", o.walk_length, "random-walk length (nodes)");
    cmd->add_option("--walks-per-node", o.walks_per_node, "random walks per node");
    cmd->add_option("--window", o.window, "co-occurrence window");
    cmd->add_option("--negatives", o.negatives, "negative samples per pair");
    cmd->add_option("--d-pool", o.d_pool, "pooling dimension");
    cmd->add_option("--d-hidden", o.d_hidden, "hidden embedding dimension");
    cmd->add_option("--d-emb", o.d_emb, "embedding dimension");
    cmd->add_option("--train-lr", o.train_lr, "regressor learning rate");
    cmd->add_option("--train-epochs", o.train_epochs, "regressor epochs");
    cmd->add_option("--batch-size", o.batch_size, "regressor minibatch size");
    cmd->add_option("--momentum", o.momentum, "regressor momentum");
    cmd->add_option("--train-fraction", o.train_fraction, "training fold fraction");
    cmd->add_option("--fold", o.fold, "metrics fold: train|test")
        ->check(CLI::IsMember({"train", "test"}));
}

ffr::PipelineConfig merge_config(const std::string& config_path, const Overrides& o) {
    ffr::PipelineConfig c;
    if (!config_path.empty()) c = ffr::config_from_json(ffr::read_file(config_path));

    if (o.netlist) c.netlist_path = *o.netlist;
    if (o.stimulus) c.stimulus_path = *o.stimulus;
    if (o.out_dir) c.out_dir = *o.out_dir;
    if (o.seed) c.seed = *o.seed;
    if (o.jobs) c.jobs = *o.jobs;
    if (o.cycles) c.cycles = *o.cycles;
    if (o.fit_default) c.fit_default = *o.fit_default;
    for (const auto& kv : o.fit_overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ffr::DataError("--fit expects name=rate, got '" + kv + "'");
        c.fit_overrides[kv.substr(0, eq)] = ffr::parse_double(kv.substr(eq + 1));
    }
    if (o.depth) c.sampler.depth = *o.depth;
    if (o.fanouts) c.sampler.fanouts = *o.fanouts;
    if (o.fanin_only) c.sampler.undirected = false;
    if (o.full_neighborhood) c.sampler.full_neighborhood = true;
    if (o.embed_epochs) c.embed.epochs = *o.embed_epochs;
    if (o.embed_lr) c.embed.lr = *o.embed_lr;
    if (o.walk_length) c.embed.walk_length = *o.walk_length;
    if (o.walks_per_node) c.embed.walks_per_node = *o.walks_per_node;
    if (o.window) c.embed.window = *o.window;
    if (o.negatives) c.embed.negatives = *o.negatives;
    if (o.d_pool) c.embed.d_pool = *o.d_pool;
    if (o.d_hidden) c.embed.d_hidden = *o.d_hidden;
    if (o.d_emb) c.embed.d_emb = *o.d_emb;
    if (o.train_lr) c.train.lr = *o.train_lr;
    if (o.train_epochs) c.train.epochs = *o.train_epochs;
    if (o.batch_size) c.train.batch_size = *o.batch_size;
    if (o.momentum) c.train.momentum = *o.momentum;
    if (o.train_fraction) c.train.train_fraction = *o.train_fraction;
    if (o.fold) c.metrics_fold = *o.fold == "train" ? ffr::Fold::Train : ffr::Fold::Test;
    return c;
}

void print_report_summary(const ffr::PredictionReport& report) {
    std::printf("fold=%s mae=%s r2=%s rows=%zu\n", ffr::to_string(report.metrics_fold),
                ffr::fmt_double(report.mae).c_str(), ffr::fmt_double(report.r2).c_str(),
                report.rows.size());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEU functional-failure-rate prediction toolchain"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string config_path;
    Overrides o;
    app.add_option("--config", config_path, "pipeline config JSON")->envname("FFRSAGE_CONFIG");
    app.add_option("--seed", o.seed, "global seed (propagates to every stage)");
    app.add_option("--jobs", o.jobs, "worker threads for the campaign and embedding");
    app.add_option("--out-dir", o.out_dir, "artifact directory");

    auto* cmd_parse = app.add_subcommand("parse", "netlist -> graph.gml + features.csv");
    auto* cmd_campaign = app.add_subcommand("campaign", "exhaustive SEU campaign -> campaign.csv");
    auto* cmd_embed = app.add_subcommand("embed", "embeddings.csv + sage_params.json");
    auto* cmd_train = app.add_subcommand("train", "dataset.csv + model.json");
    auto* cmd_predict = app.add_subcommand("predict", "predictions.csv + plotdata.csv + timing.csv");
    auto* cmd_pipeline = app.add_subcommand("pipeline", "all stages with a timing table");
    for (CLI::App* cmd : {cmd_parse, cmd_campaign, cmd_embed, cmd_train, cmd_predict, cmd_pipeline})
        add_stage_options(cmd, o);

    auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic .bench circuit");
    int gen_ffs = 1, gen_gates = 1;
    std::string gen_out;
    cmd_gen->add_option("--ffs", gen_ffs, "flip-flop count")->required();
    cmd_gen->add_option("--gates", gen_gates, "combinational gate count")->required();
    cmd_gen->add_option("--out,-o", gen_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_gen->parsed()) {
            std::string bench = ffr::gen_circuit(gen_ffs, gen_gates, o.seed.value_or(1));
            if (gen_out.empty())
                std::fputs(bench.c_str(), stdout);
            else
                ffr::write_file(gen_out, bench);
            return 0;
        }

        ffr::PipelineConfig config = merge_config(config_path, o);
        if (cmd_parse->parsed()) {
            ffr::run_parse_stage(config);
        } else if (cmd_campaign->parsed()) {
            ffr::CampaignResult result = ffr::run_campaign_stage(config);
            std::printf("flip-flops=%zu cycles=%llu aggregate_ffr=%s\n", result.per_ff.size(),
                        static_cast<unsigned long long>(result.cycles),
                        ffr::fmt_double(result.aggregate_ffr).c_str());
        } else if (cmd_embed->parsed()) {
            ffr::SageTrainResult result = ffr::run_embed_stage(config);
            std::printf("embed_loss_initial=%s embed_loss_final=%s\n",
                        ffr::fmt_double(result.loss_history.front()).c_str(),
                        ffr::fmt_double(result.loss_history.back()).c_str());
        } else if (cmd_train->parsed()) {
            ffr::MlpTrainResult result = ffr::run_train_stage(config);
            std::printf("train_mse_initial=%s train_mse_final=%s\n",
                        ffr::fmt_double(result.loss_history.front()).c_str(),
                        ffr::fmt_double(result.loss_history.back()).c_str());
        } else if (cmd_predict->parsed()) {
            print_report_summary(ffr::run_predict_stage(config));
        } else if (cmd_pipeline->parsed()) {
            ffr::PipelineOutcome outcome = ffr::run_pipeline(config);
            print_report_summary(outcome.report);
            std::printf("campaign_s=%s ml_total_s=%s\n",
                        ffr::fmt_double(outcome.times.campaign).c_str(),
                        ffr::fmt_double(outcome.times.ml_total()).c_str());
        }
        return 0;
    } catch (const ffr::NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const ffr::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ffr::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
