#ifndef FFR_METRICS_HPP
#define FFR_METRICS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ffr/mlp.hpp"

namespace ffr {

/// Mean absolute error. Throws DataError on empty or mismatched inputs.
double mae(const std::vector<double>& targets, const std::vector<double>& predictions);

/// 1 - SS_res/SS_tot; may be negative for bad fits. Throws DataError for
/// fewer than two points or zero target variance.
double r_squared(const std::vector<double>& targets, const std::vector<double>& predictions);

struct ReportRow {
    std::string name;
    Fold fold = Fold::Test;
    double target = 0.0;
    double predicted = 0.0;
};

struct StageTimes {
    double parse = 0.0;
    double campaign = 0.0;
    double embed = 0.0;
    double train = 0.0;
    double predict = 0.0;

    double ml_total() const { return embed + train + predict; }
};

struct PredictionReport {
    std::vector<ReportRow> rows;
    Fold metrics_fold = Fold::Test;
    double mae = 0.0;
    double r2 = 0.0;
    StageTimes times;
};

/// Computes MAE and R^2 over the rows of the designated fold.
PredictionReport make_report(std::vector<ReportRow> rows, Fold metrics_fold);

/// Writes, under out_dir:
///   predictions.csv  ff_name,fold,target_ffr,predicted_ffr (sorted by name)
///   plotdata.csv     index,ff_name,target_ffr,predicted_ffr (metrics fold)
///   timing.csv       stage,seconds (campaign vs embed/train/predict)
/// The two prediction files are byte-stable for identical inputs;
/// timing.csv carries measured wallclock and is the one run-dependent file.
void emit_report(const PredictionReport& report, const std::filesystem::path& out_dir);

} // namespace ffr

#endif
