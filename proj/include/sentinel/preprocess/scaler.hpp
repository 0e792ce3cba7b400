#pragma once

#include "sentinel/core/series.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace sentinel::preprocess {

/// Per-feature min/max fitted on training rows.
struct ScalerParams {
    std::vector<std::string> feature_names;
    Eigen::VectorXd min;
    Eigen::VectorXd max;

    /// (x − min)/(max − min); a constant feature maps to 0.5.
    double scale_value(std::size_t feature, double x) const;
    double unscale_value(std::size_t feature, double z) const;
};

/// Missing cells are ignored; an all-missing feature gets min = max = 0.
ScalerParams fit_scaler(const core::MultivariateSeries& train);

/// Throws ArgumentError if the feature names differ from the fitted ones.
core::MultivariateSeries scale(const core::MultivariateSeries& series, const ScalerParams& params);
core::MultivariateSeries unscale(const core::MultivariateSeries& series, const ScalerParams& params);

/// Elementwise unscale of values belonging to one feature (e.g. forecasts of the target).
Eigen::MatrixXd unscale_feature(const Eigen::MatrixXd& values, const ScalerParams& params, std::size_t feature);

}  // namespace sentinel::preprocess
