#include "sentinel/preprocess/scaler.hpp"

#include "sentinel/error.hpp"

#include <algorithm>
#include <limits>

namespace sentinel::preprocess {

double ScalerParams::scale_value(std::size_t feature, double x) const {
    const auto i = static_cast<Eigen::Index>(feature);
    const double range = max[i] - min[i];
    if (range == 0.0) return core::is_missing(x) ? x : 0.5;
    return (x - min[i]) / range;
}

double ScalerParams::unscale_value(std::size_t feature, double z) const {
    const auto i = static_cast<Eigen::Index>(feature);
    const double range = max[i] - min[i];
    if (range == 0.0) return core::is_missing(z) ? z : min[i];
    return z * range + min[i];
}

ScalerParams fit_scaler(const core::MultivariateSeries& train) {
    const auto& v = train.values();
    ScalerParams p;
    p.feature_names = train.feature_names();
    p.min.resize(v.cols());
    p.max.resize(v.cols());
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            if (core::is_missing(v(r, c))) continue;
            lo = std::min(lo, v(r, c));
            hi = std::max(hi, v(r, c));
        }
        if (lo > hi) lo = hi = 0.0;
        p.min[c] = lo;
        p.max[c] = hi;
    }
    return p;
}

namespace {

template <typename F>
core::MultivariateSeries map_values(const core::MultivariateSeries& series, const ScalerParams& params, F f) {
    if (series.feature_names() != params.feature_names)
        throw ArgumentError("scaler was fitted on a different feature set");
    Eigen::MatrixXd v = series.values();
    for (Eigen::Index c = 0; c < v.cols(); ++c)
        for (Eigen::Index r = 0; r < v.rows(); ++r) v(r, c) = f(static_cast<std::size_t>(c), v(r, c));
    return series.with_values(std::move(v));
}

}  // namespace

core::MultivariateSeries scale(const core::MultivariateSeries& series, const ScalerParams& params) {
    return map_values(series, params, [&](std::size_t c, double x) { return params.scale_value(c, x); });
}

core::MultivariateSeries unscale(const core::MultivariateSeries& series, const ScalerParams& params) {
    return map_values(series, params, [&](std::size_t c, double z) { return params.unscale_value(c, z); });
}

Eigen::MatrixXd unscale_feature(const Eigen::MatrixXd& values, const ScalerParams& params, std::size_t feature) {
    Eigen::MatrixXd out = values;
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = params.unscale_value(feature, out.data()[i]);
    return out;
}

}  // namespace sentinel::preprocess
