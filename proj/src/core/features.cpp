#include "sentinel/core/features.hpp"

#include "sentinel/error.hpp"

namespace sentinel::core {

MultivariateSeries derive_submetering4(const MultivariateSeries& series) {
    const auto gap = series.feature_index("global_active_power");
    const auto s1 = series.feature_index("sub_metering_1");
    const auto s2 = series.feature_index("sub_metering_2");
    const auto s3 = series.feature_index("sub_metering_3");
    const auto& v = series.values();
    const auto col = [&](std::size_t i) { return v.col(static_cast<Eigen::Index>(i)).array(); };
    const Eigen::VectorXd sub4 = (100.0 / 6.0) * col(gap) - col(s1) - col(s2) - col(s3);
    return series.with_feature("sub_metering_4", sub4);
}

std::size_t count_negative(const MultivariateSeries& series, const std::string& feature) {
    const auto col = series.values().col(static_cast<Eigen::Index>(series.feature_index(feature)));
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < col.size(); ++i) n += (!is_missing(col[i]) && col[i] < 0.0) ? 1 : 0;
    return n;
}

MultivariateSeries resample_aggregate(const MultivariateSeries& series, std::int64_t new_step_seconds,
                                      Aggregation agg) {
    if (new_step_seconds <= 0 || new_step_seconds % series.step() != 0)
        throw ArgumentError("new step " + std::to_string(new_step_seconds) + "s is not an integer multiple of " +
                            std::to_string(series.step()) + "s");
    const auto ratio = static_cast<std::size_t>(new_step_seconds / series.step());
    const std::size_t buckets = series.n_steps() / ratio;
    const auto& v = series.values();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(buckets), v.cols());
    std::vector<Timestamp> ts(buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
        const auto first = static_cast<Eigen::Index>(b * ratio);
        ts[b] = series.timestamps()[b * ratio];
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            // NaN propagates through the sum, marking the bucket missing.
            double total = 0.0;
            for (Eigen::Index r = first; r < first + static_cast<Eigen::Index>(ratio); ++r) total += v(r, c);
            out(static_cast<Eigen::Index>(b), c) =
                agg == Aggregation::sum ? total : total / static_cast<double>(ratio);
        }
    }
    return MultivariateSeries(std::move(ts), std::move(out), series.feature_names(), series.target_index(),
                              new_step_seconds);
}

}  // namespace sentinel::core
