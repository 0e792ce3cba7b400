#include "sentinel/preprocess/decompose.hpp"

#include "sentinel/core/csv.hpp"
#include "sentinel/error.hpp"

#include <fstream>

namespace sentinel::preprocess {

Decomposition ClassicalDecomposer::decompose(const Eigen::VectorXd& x, std::size_t period) const {
    const auto n = static_cast<std::size_t>(x.size());
    if (period == 0) throw ArgumentError("decomposition period must be positive");
    if (n < 2 * period)
        throw ArgumentError("series of length " + std::to_string(n) + " is shorter than two periods (" +
                            std::to_string(2 * period) + ")");
    const auto p = static_cast<Eigen::Index>(period);
    const Eigen::Index half = p / 2;
    Eigen::VectorXd trend(x.size());
    const Eigen::Index lo = half;
    const Eigen::Index hi = x.size() - 1 - half;
    for (Eigen::Index i = lo; i <= hi; ++i) {
        if (p % 2 == 1) {
            trend[i] = x.segment(i - half, p).sum() / static_cast<double>(p);
        } else {
            const double inner = x.segment(i - half + 1, p - 1).sum();
            trend[i] = (0.5 * x[i - half] + inner + 0.5 * x[i + half]) / static_cast<double>(p);
        }
    }
    for (Eigen::Index i = 0; i < lo; ++i) trend[i] = trend[lo];
    for (Eigen::Index i = hi + 1; i < x.size(); ++i) trend[i] = trend[hi];

    Eigen::VectorXd phase_sum = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd phase_count = Eigen::VectorXd::Zero(p);
    for (Eigen::Index i = lo; i <= hi; ++i) {
        phase_sum[i % p] += x[i] - trend[i];
        phase_count[i % p] += 1.0;
    }
    Eigen::VectorXd profile = phase_sum.cwiseQuotient(phase_count);
    profile.array() -= profile.mean();

    Decomposition d;
    d.period = period;
    d.trend = std::move(trend);
    d.seasonal.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) d.seasonal[i] = profile[i % p];
    d.residual = x - d.trend - d.seasonal;
    return d;
}

Decomposition decompose(const Eigen::VectorXd& x, std::size_t period) {
    return ClassicalDecomposer{}.decompose(x, period);
}

Eigen::VectorXd recompose(const Decomposition& d) { return d.trend + d.seasonal + d.residual; }

void write_decomposition_csv(const std::filesystem::path& path, const std::vector<core::Timestamp>& timestamps,
                             const Decomposition& d) {
    if (timestamps.size() != static_cast<std::size_t>(d.trend.size()))
        throw ArgumentError("timestamp count does not match decomposition length");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "timestamp,trend,seasonal,residual\n";
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out << core::format_iso8601(timestamps[i]) << ',' << core::format_double(d.trend[k]) << ','
            << core::format_double(d.seasonal[k]) << ',' << core::format_double(d.residual[k]) << '\n';
    }
}

SeasonalTrendAdjuster::SeasonalTrendAdjuster(const Eigen::VectorXd& train, std::size_t period,
                                             const Decomposer& decomposer) {
    const Decomposition d = decomposer.decompose(train, period);
    profile_ = d.seasonal.head(static_cast<Eigen::Index>(period));
    // Least-squares line through the trend component.
    const auto n = static_cast<double>(train.size());
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(train.size(), 0.0, n - 1.0);
    const double t_mean = t.mean();
    const double y_mean = d.trend.mean();
    const double sxx = (t.array() - t_mean).square().sum();
    slope_ = sxx > 0.0 ? ((t.array() - t_mean) * (d.trend.array() - y_mean)).sum() / sxx : 0.0;
    intercept_ = y_mean - slope_ * t_mean;
}

double SeasonalTrendAdjuster::component(std::size_t index) const {
    if (profile_.size() == 0) return 0.0;
    return profile_[static_cast<Eigen::Index>(index % static_cast<std::size_t>(profile_.size()))] + intercept_ +
           slope_ * static_cast<double>(index);
}

}  // namespace sentinel::preprocess
