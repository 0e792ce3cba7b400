#pragma once

#include "sentinel/forecast/config.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sentinel::forecast {

/// Cascade-correlation network. Hidden unit k sees [1, inputs, hidden 0..k−1]
/// through tanh; the linear output layer sees [1, inputs, all hidden].
struct CascadeNetwork {
    std::vector<Eigen::VectorXd> hidden;  // unit k has 1 + d + k weights
    Eigen::MatrixXd output;               // (1 + d + H) × horizon
    /// Training mean squared error after the output solve at each stage
    /// (entry 0 = no hidden units).
    std::vector<double> stage_mse;

    /// [1, inputs, hidden activations].
    Eigen::MatrixXd features(const Eigen::MatrixXd& inputs) const;
    Eigen::MatrixXd predict(const Eigen::MatrixXd& inputs) const;
};

/// Starts from a linear input→output layer, then repeatedly trains a pool of
/// tanh candidates by gradient ascent on |covariance| with the residual
/// error, freezes the best, and re-solves the output weights by least
/// squares. Stops at MSE < tol, at max_hidden_units, or when a unit fails to
/// reduce the error (it is then rejected).
CascadeNetwork train_cascade(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, const CcnConfig& config,
                             std::uint64_t seed);

/// Σ_o |Σ_p (v_p − v̄)(E_po − Ē_o)|, the candidate-selection score.
double candidate_correlation(const Eigen::VectorXd& activation, const Eigen::MatrixXd& residual);

}  // namespace sentinel::forecast
