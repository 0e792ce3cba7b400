#pragma once

#include "sentinel/core/series.hpp"

#include <cstddef>
#include <cstdint>

namespace sentinel::harness {

/// y_t = amplitude·sin(2πt/period) + a_t with a_t = φ·a_{t−1} + N(0, noise_sd²).
/// Exogenous features carry the seasonal phase (cos, then sin at 2×, …)
/// plus small noise so they are informative but not the target itself.
struct SyntheticSpec {
    std::size_t n = 5000;
    std::size_t period = 24;
    double phi = 0.6;
    double amplitude = 2.0;
    double noise_sd = 1.0;
    std::size_t exogenous = 1;
    std::int64_t step_seconds = 3600;
    core::Timestamp start = 1262304000;  // 2010-01-01T00:00:00
    std::uint64_t seed = 0;
};

/// Features: "y" (target, index 0) then "x1".."xk".
core::MultivariateSeries seasonal_ar1(const SyntheticSpec& spec);

}  // namespace sentinel::harness
