#pragma once

#include "sentinel/core/series.hpp"

#include <cstdint>

namespace sentinel::core {

/// Appends sub_metering_4 = (1000/60)·global_active_power − Σ sub_metering_k,
/// the per-minute active energy (Wh) not captured by the three sub-meters.
/// Negative values are kept. Throws SchemaError if an input is absent.
MultivariateSeries derive_submetering4(const MultivariateSeries& series);

/// Number of strictly negative (non-missing) cells in a feature.
std::size_t count_negative(const MultivariateSeries& series, const std::string& feature);

enum class Aggregation { sum, mean };

/// Buckets `new_step / step` consecutive rows into one. The trailing partial
/// bucket is dropped; a bucket containing a missing cell aggregates to missing.
/// Categorical columns are not carried over.
MultivariateSeries resample_aggregate(const MultivariateSeries& series, std::int64_t new_step_seconds,
                                      Aggregation agg);

}  // namespace sentinel::core
