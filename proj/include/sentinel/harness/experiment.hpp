#pragma once

#include "sentinel/core/windows.hpp"
#include "sentinel/forecast/model.hpp"
#include "sentinel/harness/config.hpp"
#include "sentinel/harness/report.hpp"
#include "sentinel/preprocess/decompose.hpp"
#include "sentinel/preprocess/encoder.hpp"
#include "sentinel/preprocess/scaler.hpp"

#include <optional>
#include <vector>

namespace sentinel::harness {

/// Root mean squared error over all cells. Throws ArgumentError when empty
/// or misaligned.
double rmse(const Eigen::MatrixXd& actuals, const Eigen::MatrixXd& forecasts);

/// CSV or synthetic source after sub-metering derivation and resampling.
core::MultivariateSeries load_series(const ExperimentConfig& config);

/// Everything the forecasters see. Fitted transforms use training rows only.
struct PreparedData {
    core::MultivariateSeries raw;    // encoded, imputed, injected; original units
    core::MultivariateSeries model;  // scaled, target optionally deseasonalized
    std::size_t split = 0;           // first test row
    std::optional<preprocess::EncoderMap> encoder;
    std::optional<preprocess::ScalerParams> scaler;
    std::optional<preprocess::SeasonalTrendAdjuster> adjuster;
    std::vector<anomaly::AnomalyWindow> labels;  // series row indices
    std::vector<std::size_t> affected;
    core::WindowedDataset train;
    core::WindowedDataset test;

    /// Model-space target values back to original units.
    double to_raw(std::size_t row, double value) const;
    Eigen::MatrixXd to_raw(const Eigen::MatrixXd& values, const std::vector<std::size_t>& target_start) const;
};

struct InjectedSeries {
    core::MultivariateSeries series;
    std::vector<anomaly::AnomalyWindow> labels;  // series row indices, ids in onset order
    std::vector<std::size_t> affected;
};

/// Applies every configured injection to rows [begin, n). Each kind is sized
/// against the clean span; later kinds avoid windows already taken.
InjectedSeries inject_span(const ExperimentConfig& config, const core::MultivariateSeries& series, std::size_t begin);

/// Encoding, imputation, injection into the test span, scaling and windowing.
PreparedData prepare(const ExperimentConfig& config, const core::MultivariateSeries& series);

/// Loads the configured source, then prepares it.
PreparedData prepare(const ExperimentConfig& config);

EvalReport run_holdout(const ExperimentConfig& config);
EvalReport run_walk_forward(const ExperimentConfig& config);
/// Dispatches on config.split.mode.
EvalReport run_experiment(const ExperimentConfig& config);
/// Same, on an already loaded series.
EvalReport run_experiment(const ExperimentConfig& config, const core::MultivariateSeries& series);

}  // namespace sentinel::harness
