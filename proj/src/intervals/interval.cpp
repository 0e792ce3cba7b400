#include "sentinel/intervals/interval.hpp"

#include "sentinel/error.hpp"
#include "sentinel/parallel.hpp"
#include "sentinel/random.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace sentinel::intervals {

using Eigen::Index;
using Eigen::MatrixXd;

std::string to_string(IntervalMethod method) {
    return method == IntervalMethod::dropout ? "dropout" : "bootstrap";
}

IntervalMethod method_from_string(const std::string& name) {
    if (name == "dropout") return IntervalMethod::dropout;
    if (name == "bootstrap") return IntervalMethod::bootstrap;
    throw ConfigError("unknown interval method '" + name + "'");
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ArgumentError("quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

PredictionInterval percentile_bounds(const EnsembleDraws& draws, double alpha, IntervalMethod method) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
    if (draws.n_reps() < 2) throw ArgumentError("percentile bounds need at least 2 draws");
    const Index rows = draws.draws.front().rows();
    const Index cols = draws.draws.front().cols();
    for (const auto& d : draws.draws) {
        if (d.rows() != rows || d.cols() != cols) throw ArgumentError("ensemble draws differ in shape");
        if (!d.allFinite()) throw ArgumentError("ensemble draws contain non-finite values");
    }
    PredictionInterval pi;
    pi.alpha = alpha;
    pi.method = method;
    pi.lower.resize(rows, cols);
    pi.upper.resize(rows, cols);
    const double q_lo = alpha / 2.0;
    const double q_hi = 1.0 - alpha / 2.0;
    std::vector<double> sample(draws.n_reps());
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) {
            for (std::size_t k = 0; k < draws.n_reps(); ++k) sample[k] = draws.draws[k](r, c);
            std::sort(sample.begin(), sample.end());
            pi.lower(r, c) = quantile_sorted(sample, q_lo);
            pi.upper(r, c) = quantile_sorted(sample, q_hi);
        }
    return pi;
}

EnsembleDraws mc_dropout_draws(const forecast::FittedModel& model, const MatrixXd& test_inputs, std::size_t n_reps,
                               std::uint64_t seed) {
    if (n_reps < 2) throw ArgumentError("n_reps must be at least 2");
    if (model.kind() != forecast::ForecasterKind::rnn)
        throw UnsupportedOperation("MC-dropout intervals require an rnn model, got " + forecast::to_string(model.kind()));
    EnsembleDraws out;
    out.draws.resize(n_reps);
    out.seeds.resize(n_reps);
    const double rate = model.config().rnn.dropout_rate;
    parallel_for(n_reps, [&](std::size_t r) {
        out.seeds[r] = seed + r;
        out.draws[r] = forecast::predict_stochastic(model, test_inputs, rate, out.seeds[r]);
    });
    return out;
}

PredictionInterval mc_dropout_interval(const forecast::FittedModel& model, const MatrixXd& test_inputs, double alpha,
                                       std::size_t n_reps, std::uint64_t seed) {
    return percentile_bounds(mc_dropout_draws(model, test_inputs, n_reps, seed), alpha, IntervalMethod::dropout);
}

EnsembleDraws bootstrap_draws(const forecast::FittedModel& base, const core::WindowedDataset& train,
                              const MatrixXd& test_inputs, std::size_t n_reps, std::uint64_t seed) {
    if (n_reps < 2) throw ArgumentError("n_reps must be at least 2");
    const MatrixXd& fitted = base.fitted_values();
    const MatrixXd& residuals = base.residuals();
    const Index m = residuals.rows();
    if (m == 0) throw BootstrapError("base model retained no residuals");
    if (fitted.rows() != static_cast<Index>(train.n_samples()))
        throw ArgumentError("base model was not fitted on this training set");

    // Readout models share one test basis across reps; only the weights change.
    const auto basis = forecast::readout_basis(base, test_inputs);
    std::vector<std::optional<MatrixXd>> slots(n_reps);
    std::vector<std::uint64_t> seeds(n_reps);
    parallel_for(n_reps, [&](std::size_t r) {
        seeds[r] = seed + r;
        auto rng = make_rng(seeds[r]);
        std::uniform_int_distribution<Index> pick(0, m - 1);
        MatrixXd synthetic(fitted.rows(), fitted.cols());
        for (Index t = 0; t < fitted.rows(); ++t) synthetic.row(t) = fitted.row(t) + residuals.row(pick(rng));
        try {
            const auto model = forecast::refit(base, train, synthetic);
            MatrixXd draw = basis ? MatrixXd(*basis * forecast::readout_weights(model))
                                  : forecast::predict(model, test_inputs);
            for (Index t = 0; t < draw.rows(); ++t) draw.row(t) += residuals.row(pick(rng));
            if (draw.allFinite()) slots[r] = std::move(draw);
        } catch (const FitError&) {
        } catch (const DivergenceError&) {
        }
    });

    EnsembleDraws out;
    for (std::size_t r = 0; r < n_reps; ++r) {
        if (slots[r]) {
            out.draws.push_back(std::move(*slots[r]));
            out.seeds.push_back(seeds[r]);
        } else {
            ++out.discarded;
        }
    }
    if (out.discarded * 10 > n_reps)
        throw BootstrapError(std::to_string(out.discarded) + " of " + std::to_string(n_reps) +
                             " bootstrap refits failed (more than 10%)");
    return out;
}

PredictionInterval bootstrap_interval(const forecast::ForecasterConfig& config, const core::WindowedDataset& train,
                                      const MatrixXd& test_inputs, double alpha, std::size_t n_reps,
                                      std::uint64_t seed) {
    const auto base = forecast::fit(train, config);
    return percentile_bounds(bootstrap_draws(base, train, test_inputs, n_reps, seed), alpha,
                             IntervalMethod::bootstrap);
}

}  // namespace sentinel::intervals
