#pragma once

#include "sentinel/core/windows.hpp"
#include "sentinel/forecast/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace sentinel::intervals {

enum class IntervalMethod { dropout, bootstrap };

std::string to_string(IntervalMethod method);
IntervalMethod method_from_string(const std::string& name);

/// Per-step band [lower, upper] (n_test × horizon) at significance alpha.
struct PredictionInterval {
    Eigen::MatrixXd lower;
    Eigen::MatrixXd upper;
    double alpha = 0.1;
    IntervalMethod method = IntervalMethod::bootstrap;
};

/// Replicated forecasts: draws[r] is the n_test × horizon forecast of rep r.
struct EnsembleDraws {
    std::vector<Eigen::MatrixXd> draws;
    std::vector<std::uint64_t> seeds;
    /// Bootstrap reps dropped because their refit failed.
    std::size_t discarded = 0;

    std::size_t n_reps() const noexcept { return draws.size(); }
};

/// Linear-interpolation empirical quantile (order statistic at q·(n − 1)).
/// `sorted` must be ascending and non-empty.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Per cell, L = α/2 and U = 1 − α/2 empirical quantiles of the draws.
/// Invariant under permutation of the draws. Throws ArgumentError when
/// fewer than two draws are present, shapes differ, or α ∉ (0, 1).
PredictionInterval percentile_bounds(const EnsembleDraws& draws, double alpha,
                                     IntervalMethod method = IntervalMethod::bootstrap);

/// n_reps stochastic forward passes with per-draw seed = seed + rep, using
/// the model's configured dropout rate.
EnsembleDraws mc_dropout_draws(const forecast::FittedModel& model, const Eigen::MatrixXd& test_inputs,
                               std::size_t n_reps, std::uint64_t seed);

PredictionInterval mc_dropout_interval(const forecast::FittedModel& model, const Eigen::MatrixXd& test_inputs,
                                       double alpha, std::size_t n_reps, std::uint64_t seed);

/// Residual bootstrap. With `base` fitted on `train` (fitted values y′ and
/// residuals ε retained), each rep r (rng seeded by seed + r):
///   1. y*_t = y′_t + ε_j with j uniform over the training rows,
///   2. refit the family on (x_t, y*_t),
///   3. forecast the test windows and add one more resampled residual per
///      forecast (the future observation's own noise).
/// Failed refits are discarded; more than 10% discarded throws BootstrapError.
EnsembleDraws bootstrap_draws(const forecast::FittedModel& base, const core::WindowedDataset& train,
                              const Eigen::MatrixXd& test_inputs, std::size_t n_reps, std::uint64_t seed);

/// Fits `config` on `train` once, then runs bootstrap_draws and percentile_bounds.
PredictionInterval bootstrap_interval(const forecast::ForecasterConfig& config, const core::WindowedDataset& train,
                                      const Eigen::MatrixXd& test_inputs, double alpha, std::size_t n_reps,
                                      std::uint64_t seed);

}  // namespace sentinel::intervals
