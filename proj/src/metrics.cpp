#include "ffr/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ffr/error.hpp"
#include "ffr/textio.hpp"

namespace ffr {

double mae(const std::vector<double>& targets, const std::vector<double>& predictions) {
    if (targets.empty()) throw DataError("mae over empty input");
    if (targets.size() != predictions.size()) throw DataError("mae length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) acc += std::abs(targets[i] - predictions[i]);
    return acc / static_cast<double>(targets.size());
}

double r_squared(const std::vector<double>& targets, const std::vector<double>& predictions) {
    if (targets.size() < 2) throw DataError("r_squared needs at least two points");
    if (targets.size() != predictions.size()) throw DataError("r_squared length mismatch");
    double mean = 0.0;
    for (double t : targets) mean += t;
    mean /= static_cast<double>(targets.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double r = targets[i] - predictions[i];
        double d = targets[i] - mean;
        ss_res += r * r;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) throw DataError("r_squared undefined: targets have zero variance");
    return 1.0 - ss_res / ss_tot;
}

PredictionReport make_report(std::vector<ReportRow> rows, Fold metrics_fold) {
    PredictionReport report;
    report.rows = std::move(rows);
    report.metrics_fold = metrics_fold;
    std::vector<double> targets, preds;
    for (const auto& row : report.rows)
        if (row.fold == metrics_fold) {
            targets.push_back(row.target);
            preds.push_back(row.predicted);
        }
    if (targets.empty())
        throw DataError(std::string("no rows in the ") + to_string(metrics_fold) + " fold");
    report.mae = mae(targets, preds);
    report.r2 = r_squared(targets, preds);
    return report;
}

void emit_report(const PredictionReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<ReportRow> sorted = report.rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const ReportRow& a, const ReportRow& b) { return a.name < b.name; });

    std::string pred = "ff_name,fold,target_ffr,predicted_ffr\n";
    for (const auto& row : sorted)
        pred += row.name + ',' + to_string(row.fold) + ',' + fmt_double(row.target) + ',' +
                fmt_double(row.predicted) + '\n';
    write_file(out_dir / "predictions.csv", pred);

    std::string plot = "index,ff_name,target_ffr,predicted_ffr\n";
    std::size_t index = 0;
    for (const auto& row : sorted) {
        if (row.fold != report.metrics_fold) continue;
        plot += std::to_string(index++) + ',' + row.name + ',' + fmt_double(row.target) + ',' +
                fmt_double(row.predicted) + '\n';
    }
    write_file(out_dir / "plotdata.csv", plot);

    std::string timing = "stage,seconds\n";
    timing += "parse," + fmt_double(report.times.parse) + '\n';
    timing += "campaign," + fmt_double(report.times.campaign) + '\n';
    timing += "embed," + fmt_double(report.times.embed) + '\n';
    timing += "train," + fmt_double(report.times.train) + '\n';
    timing += "predict," + fmt_double(report.times.predict) + '\n';
    timing += "ml_total," + fmt_double(report.times.ml_total()) + '\n';
    write_file(out_dir / "timing.csv", timing);
}

} // namespace ffr
