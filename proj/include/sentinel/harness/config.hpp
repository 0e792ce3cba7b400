#pragma once

#include "sentinel/anomaly/detector.hpp"
#include "sentinel/anomaly/injection.hpp"
#include "sentinel/core/csv.hpp"
#include "sentinel/core/features.hpp"
#include "sentinel/core/split.hpp"
#include "sentinel/forecast/config.hpp"
#include "sentinel/harness/synthetic.hpp"
#include "sentinel/intervals/interval.hpp"
#include "sentinel/preprocess/impute.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sentinel::harness {

struct DataConfig {
    std::optional<std::filesystem::path> path;  // CSV source
    core::CsvSchema schema;
    std::optional<SyntheticSpec> synthetic;     // used when no path is given
    bool derive_submetering4 = false;
    std::int64_t resample_seconds = 0;          // 0 = keep native step
    core::Aggregation resample_aggregation = core::Aggregation::sum;
};

struct PreprocessConfig {
    bool impute = true;
    preprocess::ImputeOptions impute_options{10, true, 1e-6};
    bool scale = true;
    bool deseasonalize = false;
    std::size_t period = 24;
};

struct AlgorithmConfig {
    std::string name;
    forecast::ForecasterConfig forecaster;
    intervals::IntervalMethod interval = intervals::IntervalMethod::bootstrap;
    bool explicit_seed = false;
};

struct InjectionConfig {
    std::string name;
    anomaly::InjectionSpec spec;
    bool explicit_seed = false;
};

struct ExperimentConfig {
    DataConfig data;
    PreprocessConfig preprocess;
    core::SplitSpec split;
    std::size_t window = 24;
    std::size_t horizon = 1;
    std::vector<AlgorithmConfig> algorithms;
    std::vector<double> alphas{0.1, 0.05, 0.01};
    std::size_t reps = 1000;
    anomaly::DetectorParams detector;
    bool prime_detector = true;
    std::vector<InjectionConfig> injections;
    std::optional<std::filesystem::path> labels_path;
    std::filesystem::path output_dir = "out";
    bool plots = false;
    std::uint64_t seed = 0;

    /// Throws ConfigError.
    void validate() const;
};

/// Key/value override such as ("forecasters.esn.reservoir_size", "50").
using Override = std::pair<std::string, std::string>;

/// Relative paths resolve against `base_dir`. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& toml_text, const std::vector<Override>& overrides = {},
                              const std::filesystem::path& base_dir = ".");

/// Missing file → ConfigError naming the path.
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

/// Effective configuration, echoed into report.json.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Per-stage seed derived from the master seed, stable under adding stages.
std::uint64_t algorithm_seed(const ExperimentConfig& config, const AlgorithmConfig& algorithm);
std::uint64_t interval_seed(const ExperimentConfig& config, const AlgorithmConfig& algorithm);
std::uint64_t injection_seed(const ExperimentConfig& config, const InjectionConfig& injection);
std::uint64_t synthetic_seed(const ExperimentConfig& config);

}  // namespace sentinel::harness
