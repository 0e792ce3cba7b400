#pragma once

#include "sentinel/core/windows.hpp"
#include "sentinel/forecast/config.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>

namespace sentinel::forecast {

/// Fixed random reservoir: x ← tanh(W_in·u + W·x), started from zero for
/// every window. W is sparse and rescaled to the configured spectral radius.
struct Reservoir {
    Eigen::SparseMatrix<double> weights;  // N × N
    Eigen::MatrixXd input_weights;        // N × n_features

    std::size_t size() const noexcept { return static_cast<std::size_t>(weights.rows()); }

    /// One update with input u.
    Eigen::VectorXd step(const Eigen::VectorXd& state, const Eigen::VectorXd& input) const;
    /// One update with no input drive.
    Eigen::VectorXd step(const Eigen::VectorXd& state) const;

    /// Final state after feeding each window tick (rows = samples).
    Eigen::MatrixXd final_states(const Eigen::MatrixXd& inputs, std::size_t window) const;
};

/// Largest eigenvalue magnitude of a square matrix.
double spectral_radius(const Eigen::MatrixXd& m);

/// Draws a reservoir (density, uniform(−1, 1) entries) and rescales it to
/// `config.spectral_radius`. Throws FitError when the draw is nilpotent.
Reservoir make_reservoir(std::size_t n_features, const EsnConfig& config, std::uint64_t seed);

/// Readout design: [1, last-tick input, final state] per sample.
Eigen::MatrixXd esn_design(const Reservoir& reservoir, const Eigen::MatrixXd& inputs, std::size_t window,
                           std::size_t n_features);

}  // namespace sentinel::forecast
