#pragma once

#include "sentinel/core/series.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <vector>

namespace sentinel::preprocess {

/// Additive components; trend + seasonal + residual reproduces the input.
struct Decomposition {
    Eigen::VectorXd trend;
    Eigen::VectorXd seasonal;
    Eigen::VectorXd residual;
    std::size_t period = 1;
};

/// Seasonal-trend decomposition strategy.
class Decomposer {
public:
    virtual ~Decomposer() = default;
    virtual Decomposition decompose(const Eigen::VectorXd& x, std::size_t period) const = 0;
};

/// Classical additive decomposition: centred moving-average trend (2×p for
/// even p) with ends held at the nearest defined value, seasonal = per-phase
/// mean of the detrended interior re-centred to sum to zero over one period.
class ClassicalDecomposer final : public Decomposer {
public:
    Decomposition decompose(const Eigen::VectorXd& x, std::size_t period) const override;
};

/// Throws ArgumentError when x.size() < 2·period or period == 0.
Decomposition decompose(const Eigen::VectorXd& x, std::size_t period);
Eigen::VectorXd recompose(const Decomposition& d);

/// CSV with columns timestamp, trend, seasonal, residual.
void write_decomposition_csv(const std::filesystem::path& path, const std::vector<core::Timestamp>& timestamps,
                             const Decomposition& d);

/// Removes a seasonal profile and a linear trend fitted on a training prefix
/// so they can be restored at any later index (including the test span).
class SeasonalTrendAdjuster {
public:
    SeasonalTrendAdjuster() = default;
    /// `train` holds rows 0..n−1 of the series.
    SeasonalTrendAdjuster(const Eigen::VectorXd& train, std::size_t period, const Decomposer& decomposer);

    double component(std::size_t index) const;
    double remove(std::size_t index, double value) const { return value - component(index); }
    double restore(std::size_t index, double value) const { return value + component(index); }

    const Eigen::VectorXd& seasonal_profile() const noexcept { return profile_; }
    double intercept() const noexcept { return intercept_; }
    double slope() const noexcept { return slope_; }

private:
    Eigen::VectorXd profile_;
    double intercept_ = 0.0;
    double slope_ = 0.0;
};

}  // namespace sentinel::preprocess
