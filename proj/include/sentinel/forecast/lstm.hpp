#pragma once

#include "sentinel/core/windows.hpp"
#include "sentinel/forecast/config.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>

namespace sentinel::forecast {

/// Single-layer LSTM followed by a dense layer emitting the whole horizon.
///
/// All weights live in one flat vector, laid out as
///   W (4H × F) | U (4H × H) | b (4H) | V (h × H) | c (h)
/// with gate blocks ordered input, forget, candidate, output. Matrices are
/// column-major, as Eigen maps them.
class LstmNetwork {
public:
    LstmNetwork() = default;
    LstmNetwork(std::size_t n_features, std::size_t hidden, std::size_t horizon);

    /// Uniform(−s, s) weights with s = 1/√fan_in; biases zero.
    void initialize(std::uint64_t seed);

    std::size_t n_features() const noexcept { return features_; }
    std::size_t hidden() const noexcept { return hidden_; }
    std::size_t horizon() const noexcept { return horizon_; }

    Eigen::VectorXd& parameters() noexcept { return params_; }
    const Eigen::VectorXd& parameters() const noexcept { return params_; }
    static std::size_t parameter_count(std::size_t n_features, std::size_t hidden, std::size_t horizon);

    /// Forward pass over flattened windows (rows = samples). `mask`, if given,
    /// is hidden × n_samples and multiplies the final hidden state.
    Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs, std::size_t window,
                            const Eigen::MatrixXd* mask = nullptr) const;

    /// Mean absolute error over all samples and horizon steps, and its
    /// gradient with respect to parameters() by backpropagation through time.
    double loss_and_gradient(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, std::size_t window,
                             Eigen::VectorXd& gradient, const Eigen::MatrixXd* mask = nullptr) const;

    double loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, std::size_t window,
                const Eigen::MatrixXd* mask = nullptr) const;

private:
    std::size_t features_ = 0;
    std::size_t hidden_ = 0;
    std::size_t horizon_ = 0;
    Eigen::VectorXd params_;
};

/// Inverted-dropout mask: each entry is 0 with probability `rate`,
/// otherwise 1/(1 − rate).
Eigen::MatrixXd dropout_mask(std::size_t rows, std::size_t cols, double rate, std::uint64_t seed);

/// Adam on MAE with shuffled mini-batches and dropout on the recurrent
/// layer's output. Throws DivergenceError naming the epoch on a non-finite loss.
LstmNetwork train_lstm(const core::WindowedDataset& train, const ForecasterConfig& config);

/// Hook that may alter the analytic gradient before comparison (test fixtures).
using GradientHook = std::function<void(Eigen::VectorXd&)>;

/// Largest relative error |a − n| / max(|a|, |n|, 1e−6) between analytic
/// gradients and central finite differences (step 1e−5) over every parameter.
double gradient_check(const LstmNetwork& network, const core::WindowedDataset& data, const GradientHook& hook = {});

/// Builds and seeds a network from `config` then checks it on `data`.
double gradient_check(const ForecasterConfig& config, const core::WindowedDataset& data,
                      const GradientHook& hook = {});

}  // namespace sentinel::forecast
