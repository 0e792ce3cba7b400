#pragma once

#include "sentinel/core/series.hpp"

#include <cstddef>

namespace sentinel::preprocess {

struct ImputeOptions {
    std::size_t max_iters = 10;
    /// Regress each missing cell at row t only on rows before t.
    bool past_only = false;
    double tolerance = 1e-6;
};

/// Iterative round-robin imputation: every feature with gaps is regressed
/// (least squares with intercept) on all other features, in ascending order
/// of missing count, until the largest update falls below `tolerance` or
/// `max_iters` rounds have run. A complete series is returned unchanged.
///
/// Throws ImputationError naming the feature when a feature is entirely
/// missing or at least half missing, or when no feature is fully observed.
core::MultivariateSeries impute_round_robin(const core::MultivariateSeries& series, const ImputeOptions& options = {});

}  // namespace sentinel::preprocess
