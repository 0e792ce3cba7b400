#pragma once

#include "sentinel/anomaly/detector.hpp"
#include "sentinel/anomaly/injection.hpp"
#include "sentinel/core/series.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sentinel::harness {

struct AlphaMetrics {
    double alpha = 0.0;
    double mis = 0.0;
    std::optional<double> smis;  // absent when the best MIS is zero
    double cs = 0.0;
    friend bool operator==(const AlphaMetrics&, const AlphaMetrics&) = default;
};

struct DetectionMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double ed_score = 0.0;
    std::size_t n_anomalous = 0;
    std::size_t n_breach = 0;
    friend bool operator==(const DetectionMetrics&, const DetectionMetrics&) = default;
};

/// Bounds and scores for one algorithm at one alpha, one row per scored cell.
struct IntervalTrace {
    double alpha = 0.0;
    std::vector<core::Timestamp> timestamps;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> actual;
    std::vector<double> interval_score;
};

struct AlgorithmReport {
    std::string name;
    std::string kind;
    std::string interval_method;
    bool ok = true;
    std::string error;  // set when !ok
    double rmse = 0.0;
    std::size_t bootstrap_discarded = 0;
    std::vector<AlphaMetrics> alphas;
    std::optional<DetectionMetrics> detection;

    // Artifacts; emitted as files, not part of report.json.
    std::vector<IntervalTrace> traces;
    std::vector<anomaly::DetectionRecord> detections;
    std::vector<core::Timestamp> forecast_timestamps;
    std::vector<double> forecast;  // shortest-horizon point forecast per scored row

    friend bool operator==(const AlgorithmReport& a, const AlgorithmReport& b) {
        return a.name == b.name && a.kind == b.kind && a.interval_method == b.interval_method && a.ok == b.ok &&
               a.error == b.error && a.rmse == b.rmse && a.bootstrap_discarded == b.bootstrap_discarded &&
               a.alphas == b.alphas && a.detection == b.detection;
    }
};

struct EvalReport {
    std::string mode;
    std::uint64_t seed = 0;
    std::size_t n_steps = 0;
    std::size_t n_train = 0;
    std::size_t n_test_windows = 0;
    std::vector<AlgorithmReport> algorithms;
    nlohmann::json config;  // effective configuration echo
    std::map<std::string, double> runtime_seconds;

    // Artifacts.
    std::vector<anomaly::AnomalyWindow> golden;
    std::vector<core::Timestamp> timestamps;  // full series
    Eigen::VectorXd actual;                   // full raw target

    bool any_failed() const;

    /// Compares the report.json content (timings and artifacts excluded).
    friend bool operator==(const EvalReport& a, const EvalReport& b) {
        return a.mode == b.mode && a.seed == b.seed && a.n_steps == b.n_steps && a.n_train == b.n_train &&
               a.n_test_windows == b.n_test_windows && a.algorithms == b.algorithms && a.config == b.config;
    }
};

/// report.json content. Timings are excluded so the file is reproducible.
nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

/// Writes report.json, timings.json, intervals_<algo>_<alpha>.csv,
/// detections_<algo>.ndjson, golden_labels.csv (when labels exist) and,
/// with `plots`, plots.svg. Throws IoError.
void emit_report(const EvalReport& report, const std::filesystem::path& dir, bool plots = false);

void write_interval_csv(const std::filesystem::path& path, const IntervalTrace& trace);
/// One JSON object per line; non-finite numbers become null.
void write_detections_ndjson(const std::filesystem::path& path, const std::vector<anomaly::DetectionRecord>& records,
                             const std::vector<core::Timestamp>& timestamps);

EvalReport read_report(const std::filesystem::path& report_json);

/// "0.05" style label used in artifact file names.
std::string alpha_label(double alpha);

std::string render_svg(const EvalReport& report);

}  // namespace sentinel::harness
