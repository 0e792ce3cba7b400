#include "sentinel/core/windows.hpp"

#include "sentinel/error.hpp"

namespace sentinel::core {

namespace {

WindowedDataset frame(const MultivariateSeries& series, const std::vector<std::size_t>& starts, std::size_t window,
                      std::size_t horizon, std::size_t stride) {
    if (series.has_missing()) throw ArgumentError("cannot window a series with missing values; impute first");
    const auto f = series.n_features();
    const auto& v = series.values();
    WindowedDataset ds;
    ds.window = window;
    ds.horizon = horizon;
    ds.stride = stride;
    ds.n_features = f;
    ds.target_index = series.target_index();
    ds.inputs.resize(static_cast<Eigen::Index>(starts.size()), static_cast<Eigen::Index>(window * f));
    ds.targets.resize(static_cast<Eigen::Index>(starts.size()), static_cast<Eigen::Index>(horizon));
    const auto tcol = static_cast<Eigen::Index>(series.target_index());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        for (std::size_t t = 0; t < window; ++t)
            for (std::size_t k = 0; k < f; ++k)
                ds.inputs(row, static_cast<Eigen::Index>(t * f + k)) =
                    v(static_cast<Eigen::Index>(starts[i] + t), static_cast<Eigen::Index>(k));
        for (std::size_t k = 0; k < horizon; ++k)
            ds.targets(row, static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(starts[i] + window + k), tcol);
        ds.target_start.push_back(starts[i] + window);
    }
    return ds;
}

}  // namespace

Eigen::VectorXd WindowedDataset::step_row(std::size_t sample, std::size_t t) const {
    return inputs.row(static_cast<Eigen::Index>(sample))
        .segment(static_cast<Eigen::Index>(t * n_features), static_cast<Eigen::Index>(n_features))
        .transpose();
}

WindowedDataset WindowedDataset::subset(std::size_t begin, std::size_t end) const {
    if (begin > end || end > n_samples()) throw ArgumentError("dataset subset out of range");
    WindowedDataset out = *this;
    const auto b = static_cast<Eigen::Index>(begin);
    const auto len = static_cast<Eigen::Index>(end - begin);
    out.inputs = inputs.middleRows(b, len);
    out.targets = targets.middleRows(b, len);
    out.target_start.assign(target_start.begin() + b, target_start.begin() + b + len);
    return out;
}

WindowedDataset make_windows(const MultivariateSeries& series, std::size_t window, std::size_t horizon,
                             std::size_t stride) {
    if (window == 0 || horizon == 0) throw ArgumentError("window and horizon must be positive");
    if (stride == 0) throw ArgumentError("stride must be at least 1");
    if (window + horizon > series.n_steps())
        throw ArgumentError("series too short: " + std::to_string(series.n_steps()) + " steps < window " +
                            std::to_string(window) + " + horizon " + std::to_string(horizon));
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + window + horizon <= series.n_steps(); s += stride) starts.push_back(s);
    return frame(series, starts, window, horizon, stride);
}

WindowedDataset make_forecast_windows(const MultivariateSeries& series, std::size_t first_target,
                                      std::size_t window, std::size_t horizon) {
    if (window == 0 || horizon == 0) throw ArgumentError("window and horizon must be positive");
    if (first_target < window)
        throw ArgumentError("not enough history before row " + std::to_string(first_target) + " for window " +
                            std::to_string(window));
    std::vector<std::size_t> starts;
    for (std::size_t t = first_target; t + horizon <= series.n_steps(); t += horizon) starts.push_back(t - window);
    if (starts.empty()) throw ArgumentError("test span shorter than one horizon");
    return frame(series, starts, window, horizon, horizon);
}

}  // namespace sentinel::core
