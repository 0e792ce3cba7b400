#pragma once

#include "sentinel/core/windows.hpp"
#include "sentinel/forecast/ccn.hpp"
#include "sentinel/forecast/config.hpp"
#include "sentinel/forecast/esn.hpp"
#include "sentinel/forecast/lstm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace sentinel::forecast {

struct PersistenceParams {};

/// Linear readout over selected input columns: ŷ = [1, x_cols]·coefficients.
/// MLR uses every column of the window, ARX the last lag_order ticks.
struct LinearParams {
    std::vector<Eigen::Index> columns;
    Eigen::MatrixXd coefficients;  // (1 + columns) × horizon
};

struct EsnParams {
    Reservoir reservoir;
    Eigen::MatrixXd readout;  // (1 + F + N) × horizon
};

struct CcnParams {
    CascadeNetwork network;
};

struct RnnParams {
    LstmNetwork network;
};

using ModelParams = std::variant<PersistenceParams, LinearParams, EsnParams, CcnParams, RnnParams>;

/// Point forecasts, one row per input window, one column per horizon step.
struct ForecastResult {
    Eigen::MatrixXd values;
    /// Series row of each row's first forecast step (empty when unknown).
    std::vector<std::size_t> target_start;
};

/// Cached least-squares state for linear readouts, so refits on synthetic
/// targets reuse the design and its factorization. Not serialized.
struct ReadoutCache {
    Eigen::MatrixXd design;
    Eigen::LLT<Eigen::MatrixXd> factor;
};

/// An immutable trained forecaster with its in-sample fitted values and
/// residuals (fitted + residual = training target).
class FittedModel {
public:
    FittedModel(ForecasterConfig config, std::size_t n_features, std::size_t target_index, ModelParams params,
                Eigen::MatrixXd fitted, Eigen::MatrixXd residuals, std::shared_ptr<const ReadoutCache> cache = {});

    ForecasterKind kind() const noexcept { return config_.kind; }
    const ForecasterConfig& config() const noexcept { return config_; }
    std::size_t n_features() const noexcept { return n_features_; }
    std::size_t target_index() const noexcept { return target_index_; }
    std::size_t input_width() const noexcept { return config_.window * n_features_; }
    const ModelParams& params() const noexcept { return params_; }
    const Eigen::MatrixXd& fitted_values() const noexcept { return fitted_; }
    const Eigen::MatrixXd& residuals() const noexcept { return residuals_; }
    const ReadoutCache* cache() const noexcept { return cache_.get(); }
    std::shared_ptr<const ReadoutCache> shared_cache() const noexcept { return cache_; }

private:
    ForecasterConfig config_;
    std::size_t n_features_;
    std::size_t target_index_;
    ModelParams params_;
    Eigen::MatrixXd fitted_;
    Eigen::MatrixXd residuals_;
    std::shared_ptr<const ReadoutCache> cache_;
};

/// Trains a forecaster. The dataset's window and horizon must match the
/// config. Throws ArgumentError, ConfigError, FitError or DivergenceError.
FittedModel fit(const core::WindowedDataset& train, const ForecasterConfig& config);

/// Fits the same family on the same inputs with replacement targets. For
/// linear readouts (mlr, arx, esn) this reuses the base model's cached design
/// and is bit-identical to a fresh fit on those targets.
FittedModel refit(const FittedModel& base, const core::WindowedDataset& train, const Eigen::MatrixXd& targets);

/// Deterministic forecasts (dropout disabled). Throws ArgumentError on a
/// window width mismatch.
Eigen::MatrixXd predict(const FittedModel& model, const Eigen::MatrixXd& inputs);
ForecastResult predict(const FittedModel& model, const core::WindowedDataset& data);

/// MC-dropout forecasts: fresh Bernoulli(1 − rate) masks scaled by
/// 1/(1 − rate) on the recurrent layer's output. Only for rnn models;
/// throws UnsupportedOperation otherwise.
/// Design matrix of readout-based models (mlr, arx, esn); nullopt otherwise.
/// For these models predict(model, x) is exactly readout_basis(model, x) * readout_weights(model).
std::optional<Eigen::MatrixXd> readout_basis(const FittedModel& model, const Eigen::MatrixXd& inputs);
/// Throws UnsupportedOperation for models without a linear readout.
const Eigen::MatrixXd& readout_weights(const FittedModel& model);

Eigen::MatrixXd predict_stochastic(const FittedModel& model, const Eigen::MatrixXd& inputs, double dropout_rate,
                                   std::uint64_t seed);

}  // namespace sentinel::forecast
