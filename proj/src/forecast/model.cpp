#include "sentinel/forecast/model.hpp"

#include "sentinel/error.hpp"
#include "sentinel/linalg.hpp"
#include "sentinel/random.hpp"

#include <numeric>

namespace sentinel::forecast {

using Eigen::Index;
using Eigen::MatrixXd;

FittedModel::FittedModel(ForecasterConfig config, std::size_t n_features, std::size_t target_index,
                         ModelParams params, MatrixXd fitted, MatrixXd residuals,
                         std::shared_ptr<const ReadoutCache> cache)
    : config_(std::move(config)), n_features_(n_features), target_index_(target_index), params_(std::move(params)),
      fitted_(std::move(fitted)), residuals_(std::move(residuals)), cache_(std::move(cache)) {
    if (fitted_.rows() != residuals_.rows() || fitted_.cols() != residuals_.cols())
        throw ArgumentError("fitted values and residuals differ in shape");
}

namespace {

MatrixXd select_columns(const MatrixXd& inputs, const std::vector<Index>& columns) {
    MatrixXd out(inputs.rows(), static_cast<Index>(columns.size()) + 1);
    out.col(0).setOnes();
    for (std::size_t k = 0; k < columns.size(); ++k)
        out.col(static_cast<Index>(k) + 1) = inputs.col(columns[k]);
    return out;
}

std::vector<Index> linear_columns(const ForecasterConfig& config, std::size_t n_features) {
    const auto width = static_cast<Index>(config.window * n_features);
    const Index first = config.kind == ForecasterKind::arx
                            ? static_cast<Index>((config.window - config.arx.lag_order) * n_features)
                            : 0;
    std::vector<Index> cols(static_cast<std::size_t>(width - first));
    std::iota(cols.begin(), cols.end(), first);
    return cols;
}

double readout_ridge(const ForecasterConfig& config) {
    return config.kind == ForecasterKind::esn ? config.esn.ridge_lambda : 0.0;
}

std::shared_ptr<ReadoutCache> make_cache(MatrixXd design, double ridge) {
    auto cache = std::make_shared<ReadoutCache>();
    cache->factor = linalg::factor_gram(design.transpose() * design, ridge);
    cache->design = std::move(design);
    return cache;
}

MatrixXd solve_readout(const ReadoutCache& cache, const MatrixXd& targets) {
    MatrixXd coef = cache.factor.solve(cache.design.transpose() * targets);
    if (!coef.allFinite()) throw FitError("readout solve produced non-finite coefficients");
    return coef;
}

MatrixXd persistence_forecast(const MatrixXd& inputs, std::size_t window, std::size_t n_features,
                              std::size_t target_index, std::size_t horizon) {
    const auto last = static_cast<Index>((window - 1) * n_features + target_index);
    MatrixXd out(inputs.rows(), static_cast<Index>(horizon));
    for (Index k = 0; k < out.cols(); ++k) out.col(k) = inputs.col(last);
    return out;
}

void check_dataset(const core::WindowedDataset& data, const ForecasterConfig& config) {
    if (data.n_samples() == 0) throw ArgumentError("training dataset is empty");
    if (data.window != config.window || data.horizon != config.horizon)
        throw ArgumentError("dataset window/horizon (" + std::to_string(data.window) + "/" +
                            std::to_string(data.horizon) + ") differ from config (" + std::to_string(config.window) +
                            "/" + std::to_string(config.horizon) + ")");
    if (data.inputs.cols() != static_cast<Index>(data.window * data.n_features))
        throw ArgumentError("dataset input width does not match window × features");
    if (!data.inputs.allFinite() || !data.targets.allFinite())
        throw ArgumentError("training dataset contains non-finite values");
}

FittedModel assemble(const ForecasterConfig& config, const core::WindowedDataset& train, ModelParams params,
                     const MatrixXd& targets, std::shared_ptr<const ReadoutCache> cache = {}) {
    FittedModel shell(config, train.n_features, train.target_index, params, MatrixXd(), MatrixXd(), cache);
    // The cached design is the readout basis of the training inputs.
    MatrixXd fitted = cache ? MatrixXd(cache->design * readout_weights(shell)) : predict(shell, train.inputs);
    if (!fitted.allFinite()) throw FitError(to_string(config.kind) + " produced non-finite fitted values");
    MatrixXd residuals = targets - fitted;
    return FittedModel(config, train.n_features, train.target_index, std::move(params), std::move(fitted),
                       std::move(residuals), std::move(cache));
}

// `base`, when given, is a model of the same family fitted on the same inputs;
// its readout cache (and reservoir) are shared instead of recomputed.
FittedModel fit_with_targets(const core::WindowedDataset& train, const ForecasterConfig& config,
                             const MatrixXd& targets, const FittedModel* base) {
    std::shared_ptr<const ReadoutCache> reuse = base ? base->shared_cache() : nullptr;
    switch (config.kind) {
        case ForecasterKind::persistence: return assemble(config, train, PersistenceParams{}, targets);
        case ForecasterKind::mlr:
        case ForecasterKind::arx: {
            LinearParams p;
            p.columns = linear_columns(config, train.n_features);
            std::shared_ptr<const ReadoutCache> cache =
                reuse ? reuse : make_cache(select_columns(train.inputs, p.columns), readout_ridge(config));
            p.coefficients = solve_readout(*cache, targets);
            return assemble(config, train, std::move(p), targets, std::move(cache));
        }
        case ForecasterKind::esn: {
            EsnParams p;
            std::shared_ptr<const ReadoutCache> cache;
            if (reuse) {
                p.reservoir = std::get<EsnParams>(base->params()).reservoir;
                cache = reuse;
            } else {
                p.reservoir = make_reservoir(train.n_features, config.esn, stage_seed(config.seed, "esn.reservoir"));
                cache = make_cache(esn_design(p.reservoir, train.inputs, train.window, train.n_features),
                                   readout_ridge(config));
            }
            p.readout = solve_readout(*cache, targets);
            return assemble(config, train, std::move(p), targets, std::move(cache));
        }
        case ForecasterKind::ccn: {
            CcnParams p{train_cascade(train.inputs, targets, config.ccn, stage_seed(config.seed, "ccn"))};
            return assemble(config, train, std::move(p), targets);
        }
        case ForecasterKind::rnn: {
            core::WindowedDataset data = train;
            data.targets = targets;
            RnnParams p{train_lstm(data, config)};
            return assemble(config, train, std::move(p), targets);
        }
    }
    throw UnsupportedOperation("unknown forecaster kind");
}

}  // namespace

FittedModel fit(const core::WindowedDataset& train, const ForecasterConfig& config) {
    config.validate();
    check_dataset(train, config);
    return fit_with_targets(train, config, train.targets, nullptr);
}

FittedModel refit(const FittedModel& base, const core::WindowedDataset& train, const MatrixXd& targets) {
    check_dataset(train, base.config());
    if (targets.rows() != train.targets.rows() || targets.cols() != train.targets.cols())
        throw ArgumentError("replacement targets have the wrong shape");
    const bool reusable = base.cache() && base.cache()->design.rows() == train.inputs.rows();
    return fit_with_targets(train, base.config(), targets, reusable ? &base : nullptr);
}

MatrixXd predict(const FittedModel& model, const MatrixXd& inputs) {
    if (inputs.cols() != static_cast<Index>(model.input_width()))
        throw ArgumentError("input width " + std::to_string(inputs.cols()) + " does not match the trained width " +
                            std::to_string(model.input_width()));
    const auto& cfg = model.config();
    return std::visit(
        [&](const auto& p) -> MatrixXd {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PersistenceParams>) {
                return persistence_forecast(inputs, cfg.window, model.n_features(), model.target_index(),
                                            cfg.horizon);
            } else if constexpr (std::is_same_v<T, LinearParams> || std::is_same_v<T, EsnParams>) {
                return *readout_basis(model, inputs) * readout_weights(model);
            } else if constexpr (std::is_same_v<T, CcnParams>) {
                return p.network.predict(inputs);
            } else {
                return p.network.forward(inputs, cfg.window);
            }
        },
        model.params());
}

std::optional<MatrixXd> readout_basis(const FittedModel& model, const MatrixXd& inputs) {
    if (inputs.cols() != static_cast<Index>(model.input_width()))
        throw ArgumentError("input width does not match the trained width");
    if (const auto* p = std::get_if<LinearParams>(&model.params())) return select_columns(inputs, p->columns);
    if (const auto* p = std::get_if<EsnParams>(&model.params()))
        return esn_design(p->reservoir, inputs, model.config().window, model.n_features());
    return std::nullopt;
}

const MatrixXd& readout_weights(const FittedModel& model) {
    if (const auto* p = std::get_if<LinearParams>(&model.params())) return p->coefficients;
    if (const auto* p = std::get_if<EsnParams>(&model.params())) return p->readout;
    throw UnsupportedOperation(to_string(model.kind()) + " has no linear readout");
}

ForecastResult predict(const FittedModel& model, const core::WindowedDataset& data) {
    return {predict(model, data.inputs), data.target_start};
}

MatrixXd predict_stochastic(const FittedModel& model, const MatrixXd& inputs, double dropout_rate,
                            std::uint64_t seed) {
    const auto* rnn = std::get_if<RnnParams>(&model.params());
    if (!rnn) throw UnsupportedOperation("predict_stochastic requires an rnn model, got " + to_string(model.kind()));
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ArgumentError("dropout rate must lie in [0, 1)");
    if (dropout_rate == 0.0) return predict(model, inputs);
    if (inputs.cols() != static_cast<Index>(model.input_width()))
        throw ArgumentError("input width does not match the trained width");
    const MatrixXd mask =
        dropout_mask(rnn->network.hidden(), static_cast<std::size_t>(inputs.rows()), dropout_rate, seed);
    return rnn->network.forward(inputs, model.config().window, &mask);
}

}  // namespace sentinel::forecast
