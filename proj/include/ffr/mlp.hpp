#ifndef FFR_MLP_HPP
#define FFR_MLP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ffr/linalg.hpp"

namespace ffr {

inline double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

/// Fully connected regressor, five neuron layers including the input:
/// d_in -> 64 -> 32 -> 16 -> 1. Hidden activations ReLU, output logistic
/// so predictions stay in (0,1).
struct DenseLayer {
    Mat w;
    Vec b;
};

struct MlpParams {
    std::vector<DenseLayer> layers;

    int input_dim() const { return static_cast<int>(layers.front().w.cols); }
};

inline const std::vector<int> kDefaultHiddenWidths = {64, 32, 16};

MlpParams init_mlp_params(int d_in, const std::vector<int>& hidden_widths, std::uint64_t seed);

Vec mlp_params_to_flat(const MlpParams& params);
void mlp_params_from_flat(MlpParams& params, const Vec& flat);

/// Deterministic forward pass; output strictly in (0,1).
double mlp_forward(const MlpParams& params, const double* x, std::size_t dim);

enum class Fold : std::uint8_t { Train, Test };

const char* to_string(Fold fold);

struct DataRow {
    std::string name;     // flip-flop cell name
    Vec embedding;
    double target = 0.0;  // ffr in [0,1]
    Fold fold = Fold::Test;
};

struct Dataset {
    std::vector<DataRow> rows;
};

/// Marks ceil(frac*N) rows as the training fold via a seeded shuffle;
/// folds are disjoint and exhaustive. Throws DataError when fewer than
/// two rows are given, frac is outside (0,1), or a fold comes out empty.
void split_dataset(Dataset& dataset, double train_fraction, std::uint64_t seed);

struct TrainConfig {
    double lr = 0.05;
    int epochs = 200;
    int batch_size = 16;
    double momentum = 0.9;
    double train_fraction = 0.4;
    std::uint64_t seed = 0;
};

struct MlpTrainResult {
    MlpParams params;
    /// loss_history[0] is the train-fold MSE before any update,
    /// loss_history[e] the full train-fold MSE after epoch e.
    std::vector<double> loss_history;
    /// Per dataset row: number of minibatch gradients the row entered.
    /// Test-fold rows must end at zero (fold-hygiene instrumentation).
    std::vector<std::uint64_t> grad_contributions;
};

/// Momentum-SGD on train-fold MSE. Seed-deterministic; throws
/// NumericError with the epoch index if the loss turns non-finite.
MlpTrainResult train_mlp(const Dataset& dataset, const TrainConfig& config);

/// Predictions for every row (both folds), row order preserved.
std::vector<double> mlp_predict(const MlpParams& params, const Dataset& dataset);

/// Mean squared error over the batch plus d(loss)/d(params) (zeroed
/// first) — exposed for the finite-difference gradient checks.
/// `kink_margin`, when given, is min-accumulated with the smallest |pre|
/// over all ReLU pre-activations.
double mlp_loss_and_grad(const MlpParams& params, const Mat& inputs, const Vec& targets,
                         MlpParams* grads, double* kink_margin = nullptr);

std::string mlp_params_to_json(const MlpParams& params, const TrainConfig& config);
std::pair<MlpParams, TrainConfig> mlp_params_from_json(const std::string& text);

/// Dataset CSV: `ff_name,fold,target_ffr,e0..e{d-1}`.
std::string dataset_to_csv(const Dataset& dataset);
Dataset dataset_from_csv(const std::string& text);

} // namespace ffr

#endif
