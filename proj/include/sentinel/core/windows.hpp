#pragma once

#include "sentinel/core/series.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace sentinel::core {

/// Supervised framing of a series: each sample is an input window of
/// `window` rows (flattened time-major, so column t·n_features + f holds
/// feature f at window offset t) and `horizon` future target values.
struct WindowedDataset {
    Eigen::MatrixXd inputs;   // n_samples × (window · n_features)
    Eigen::MatrixXd targets;  // n_samples × horizon
    std::size_t window = 0;
    std::size_t horizon = 0;
    std::size_t stride = 1;
    std::size_t n_features = 0;
    std::size_t target_index = 0;
    /// Source-series row of the first target of each sample.
    std::vector<std::size_t> target_start;

    std::size_t n_samples() const noexcept { return static_cast<std::size_t>(inputs.rows()); }

    /// Row t (0 ≤ t < window) of sample i as a feature vector.
    Eigen::VectorXd step_row(std::size_t sample, std::size_t t) const;

    /// Samples [begin, end).
    WindowedDataset subset(std::size_t begin, std::size_t end) const;
};

/// Sliding windows over one series. Sample count is
/// floor((n_steps − window − horizon) / stride) + 1. Throws ArgumentError
/// when the series is too short, stride is zero, or values are missing.
WindowedDataset make_windows(const MultivariateSeries& series, std::size_t window, std::size_t horizon,
                             std::size_t stride = 1);

/// Windows whose targets tile rows [first_target, n_steps) in horizon-sized
/// strides while inputs may reach back before `first_target` (the realised
/// history). A trailing partial horizon is dropped.
WindowedDataset make_forecast_windows(const MultivariateSeries& series, std::size_t first_target,
                                      std::size_t window, std::size_t horizon);

}  // namespace sentinel::core
