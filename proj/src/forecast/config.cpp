#include "sentinel/forecast/config.hpp"

#include "sentinel/error.hpp"

namespace sentinel::forecast {

std::string to_string(ForecasterKind kind) {
    switch (kind) {
        case ForecasterKind::persistence: return "persistence";
        case ForecasterKind::mlr: return "mlr";
        case ForecasterKind::arx: return "arx";
        case ForecasterKind::esn: return "esn";
        case ForecasterKind::ccn: return "ccn";
        case ForecasterKind::rnn: return "rnn";
    }
    return "unknown";
}

ForecasterKind kind_from_string(const std::string& name) {
    for (auto k : {ForecasterKind::persistence, ForecasterKind::mlr, ForecasterKind::arx, ForecasterKind::esn,
                   ForecasterKind::ccn, ForecasterKind::rnn})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown forecaster kind '" + name + "'");
}

void ForecasterConfig::validate() const {
    if (horizon == 0) throw ConfigError("horizon must be at least 1");
    if (window == 0) throw ConfigError("window must be at least 1");
    switch (kind) {
        case ForecasterKind::esn:
            if (esn.reservoir_size == 0) throw ConfigError("esn.reservoir_size must be positive");
            if (!(esn.spectral_radius > 0.0 && esn.spectral_radius < 1.0))
                throw ConfigError("esn.spectral_radius must lie in (0, 1)");
            if (!(esn.density > 0.0 && esn.density <= 1.0)) throw ConfigError("esn.density must lie in (0, 1]");
            if (esn.ridge_lambda < 0.0) throw ConfigError("esn.ridge_lambda must be non-negative");
            if (esn.washout_steps >= window) throw ConfigError("esn.washout_steps must be smaller than the window");
            break;
        case ForecasterKind::ccn:
            if (ccn.candidate_pool == 0) throw ConfigError("ccn.candidate_pool must be positive");
            if (ccn.patience == 0) throw ConfigError("ccn.patience must be positive");
            if (ccn.tol < 0.0) throw ConfigError("ccn.tol must be non-negative");
            break;
        case ForecasterKind::rnn:
            if (rnn.hidden_units == 0) throw ConfigError("rnn.hidden_units must be positive");
            if (rnn.batch_size == 0) throw ConfigError("rnn.batch_size must be positive");
            if (!(rnn.learning_rate > 0.0)) throw ConfigError("rnn.learning_rate must be positive");
            if (!(rnn.dropout_rate >= 0.0 && rnn.dropout_rate < 1.0))
                throw ConfigError("rnn.dropout_rate must lie in [0, 1)");
            break;
        case ForecasterKind::arx:
            if (arx.lag_order == 0 || arx.lag_order > window)
                throw ConfigError("arx.lag_order must lie in [1, window]");
            break;
        default: break;
    }
}

}  // namespace sentinel::forecast
