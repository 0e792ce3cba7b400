#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace sentinel::forecast {

enum class ForecasterKind { persistence, mlr, arx, esn, ccn, rnn };

std::string to_string(ForecasterKind kind);
/// Throws ConfigError for an unknown name.
ForecasterKind kind_from_string(const std::string& name);

struct EsnConfig {
    std::size_t reservoir_size = 100;
    double spectral_radius = 0.95;
    double density = 0.1;
    double ridge_lambda = 1e-6;
    /// Leading ticks of each window that only prime the reservoir; must be < window.
    std::size_t washout_steps = 0;
    double input_scaling = 1.0;
    friend bool operator==(const EsnConfig&, const EsnConfig&) = default;
};

struct CcnConfig {
    std::size_t max_hidden_units = 24;
    std::size_t candidate_pool = 8;
    /// Candidate training stops after this many steps without improvement.
    std::size_t patience = 25;
    /// Training mean squared error at which cascading stops.
    double tol = 1e-6;
    std::size_t max_candidate_steps = 1000;
    double candidate_learning_rate = 0.05;
    friend bool operator==(const CcnConfig&, const CcnConfig&) = default;
};

struct RnnConfig {
    std::size_t hidden_units = 50;
    std::size_t epochs = 25;
    std::size_t batch_size = 72;
    double learning_rate = 1e-3;
    double dropout_rate = 0.0;
    friend bool operator==(const RnnConfig&, const RnnConfig&) = default;
};

struct ArxConfig {
    std::size_t lag_order = 1;
    friend bool operator==(const ArxConfig&, const ArxConfig&) = default;
};

struct ForecasterConfig {
    ForecasterKind kind = ForecasterKind::persistence;
    std::size_t horizon = 1;
    std::size_t window = 1;
    std::uint64_t seed = 0;
    EsnConfig esn;
    CcnConfig ccn;
    RnnConfig rnn;
    ArxConfig arx;

    /// Throws ConfigError on an out-of-range hyperparameter.
    void validate() const;

    friend bool operator==(const ForecasterConfig&, const ForecasterConfig&) = default;
};

}  // namespace sentinel::forecast
