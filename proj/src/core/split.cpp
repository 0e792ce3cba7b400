#include "sentinel/core/split.hpp"

#include "sentinel/error.hpp"

#include <algorithm>
#include <cmath>

namespace sentinel::core {

std::size_t split_index(const MultivariateSeries& series, const SplitSpec& spec) {
    if (spec.refit) throw ArgumentError("refit is not supported: models are evaluated statically");
    const std::size_t n = series.n_steps();
    std::size_t idx = 0;
    if (const auto* fraction = std::get_if<double>(&spec.boundary)) {
        if (!(*fraction > 0.0 && *fraction < 1.0))
            throw ArgumentError("split fraction must lie in (0, 1)");
        idx = static_cast<std::size_t>(std::llround(*fraction * static_cast<double>(n)));
    } else {
        const auto t = std::get<Timestamp>(spec.boundary);
        const auto& ts = series.timestamps();
        idx = static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), t) - ts.begin());
    }
    if (idx == 0) throw ArgumentError("split boundary leaves the training span empty");
    if (idx >= n) throw ArgumentError("split boundary leaves the test span empty");
    return idx;
}

std::pair<MultivariateSeries, MultivariateSeries> split(const MultivariateSeries& series, const SplitSpec& spec) {
    const auto idx = split_index(series, spec);
    return {series.slice(0, idx), series.slice(idx, series.n_steps())};
}

}  // namespace sentinel::core
