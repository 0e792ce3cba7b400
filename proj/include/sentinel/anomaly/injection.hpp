#pragma once

#include "sentinel/core/series.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sentinel::anomaly {

enum class AnomalyKind { changepoint, collective, contextual };

std::string to_string(AnomalyKind kind);
AnomalyKind anomaly_kind_from_string(const std::string& name);

struct InjectionSpec {
    AnomalyKind kind = AnomalyKind::contextual;
    /// Fraction of points affected, in (0, 0.1].
    double contamination = 0.01;
    /// Offset added, in units of the target's standard deviation.
    double magnitude_sigmas = 15.0;
    /// Length of each collective run (≥ 2).
    std::size_t run_length = 5;
    /// Detection allowance after a changepoint onset, in steps.
    std::size_t season_length = 24;
    /// Minimum clean gap between injected regions.
    std::size_t min_gap = 2;
    std::uint64_t seed = 0;

    /// Throws ArgumentError.
    void validate() const;
};

/// Golden label: anomaly `id` is considered detected in [b, e] (inclusive).
struct AnomalyWindow {
    std::size_t id = 0;
    std::size_t b = 0;
    std::size_t e = 0;
    AnomalyKind kind = AnomalyKind::contextual;

    friend bool operator==(const AnomalyWindow&, const AnomalyWindow&) = default;
};

struct InjectionResult {
    core::MultivariateSeries series;
    std::vector<AnomalyWindow> labels;
    /// Every affected row, ascending.
    std::vector<std::size_t> affected;
};

/// Adds magnitude_sigmas · std(target) to round(contamination · n) target
/// cells: one shifted segment for a changepoint (window [onset, onset +
/// season_length]), runs of run_length for collective (window [onset,
/// onset + run]), isolated points for contextual (window [i, i + 1]).
/// Regions keep min_gap clean rows between them and avoid `occupied`
/// windows. Seeded and deterministic; untouched cells stay bit-identical.
/// Throws ArgumentError when the contamination rounds to no points or the
/// regions cannot be placed.
InjectionResult inject_anomalies(const core::MultivariateSeries& series, const InjectionSpec& spec,
                                 const std::vector<AnomalyWindow>& occupied = {});

/// CSV columns: anomaly_id, b, e, kind.
void write_labels_csv(const std::filesystem::path& path, const std::vector<AnomalyWindow>& labels);
std::vector<AnomalyWindow> read_labels_csv(const std::filesystem::path& path);

}  // namespace sentinel::anomaly
