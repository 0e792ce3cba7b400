#pragma once

#include "sentinel/core/series.hpp"

#include <utility>
#include <variant>

namespace sentinel::core {

enum class SplitMode { holdout, walk_forward };

/// Train/test boundary: either a fraction of the rows or a timestamp. The
/// first row at or after the boundary starts the test span.
struct SplitSpec {
    SplitMode mode = SplitMode::holdout;
    std::variant<double, Timestamp> boundary = 0.8;
    /// Models are evaluated statically; must stay false.
    bool refit = false;
};

/// Index of the first test row. Throws ArgumentError if either side is empty.
std::size_t split_index(const MultivariateSeries& series, const SplitSpec& spec);

std::pair<MultivariateSeries, MultivariateSeries> split(const MultivariateSeries& series, const SplitSpec& spec);

}  // namespace sentinel::core
