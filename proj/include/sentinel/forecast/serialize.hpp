#pragma once

#include "sentinel/forecast/model.hpp"

#include <json.hpp>

#include <filesystem>

namespace sentinel::forecast {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "interval-sentinel-model";

nlohmann::json config_to_json(const ForecasterConfig& config);
/// Missing keys keep their defaults. Throws ConfigError on a bad kind.
ForecasterConfig config_from_json(const nlohmann::json& j);

/// Self-describing document: format, version, kind, config, parameter arrays,
/// fitted values and residuals.
nlohmann::json model_to_json(const FittedModel& model);
/// Throws VersionError on a format or version mismatch, ParseError on a
/// malformed document.
FittedModel model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const FittedModel& model);
FittedModel load_model(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

}  // namespace sentinel::forecast
