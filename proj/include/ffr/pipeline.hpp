#ifndef FFR_PIPELINE_HPP
#define FFR_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ffr/campaign.hpp"
#include "ffr/metrics.hpp"
#include "ffr/mlp.hpp"
#include "ffr/sage.hpp"

namespace ffr {

/// End-to-end configuration. The global seed is the only seed a user
/// sets; every stage derives its own stream from it.
struct PipelineConfig {
    std::string netlist_path;
    std::string stimulus_path; // empty: generate seeded-random vectors
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int jobs = 0;      // campaign/embedding parallelism; 0 = all cores
    int cycles = 64;   // length of generated stimulus
    double fit_default = 1.0;
    std::map<std::string, double> fit_overrides;
    SamplerConfig sampler;
    SageTrainConfig embed;
    TrainConfig train;
    Fold metrics_fold = Fold::Test;
};

/// Reads a JSON config; absent fields keep their defaults.
PipelineConfig config_from_json(const std::string& text);

// artifact names under out_dir
inline constexpr const char* kGraphFile = "graph.gml";
inline constexpr const char* kFeaturesFile = "features.csv";
inline constexpr const char* kStimulusFile = "stimulus.json";
inline constexpr const char* kCampaignFile = "campaign.csv";
inline constexpr const char* kEmbeddingsFile = "embeddings.csv";
inline constexpr const char* kSageParamsFile = "sage_params.json";
inline constexpr const char* kDatasetFile = "dataset.csv";
inline constexpr const char* kModelFile = "model.json";

std::string features_to_csv(const CircuitGraph& graph, const FeatureMatrix& features);

/// parse: netlist -> graph.gml + features.csv
void run_parse_stage(const PipelineConfig& config);

/// campaign: netlist + stimulus -> campaign.csv (plus stimulus.json when
/// the vectors were generated)
CampaignResult run_campaign_stage(const PipelineConfig& config);

/// embed: netlist -> unsupervised aggregator training, embeddings.csv +
/// sage_params.json. Returns the training loss history.
SageTrainResult run_embed_stage(const PipelineConfig& config);

/// train: embeddings.csv + campaign.csv -> dataset.csv (with folds) +
/// model.json
MlpTrainResult run_train_stage(const PipelineConfig& config);

/// predict: model.json + dataset.csv -> predictions.csv, plotdata.csv,
/// timing.csv
PredictionReport run_predict_stage(const PipelineConfig& config,
                                   const std::optional<StageTimes>& times = std::nullopt);

struct PipelineOutcome {
    StageTimes times;
    SageTrainResult embed;
    MlpTrainResult train;
    PredictionReport report;
};

/// All stages in order with per-stage wallclock in the timing report.
PipelineOutcome run_pipeline(const PipelineConfig& config);

} // namespace ffr

#endif
