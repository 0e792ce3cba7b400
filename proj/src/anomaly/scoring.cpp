#include "sentinel/anomaly/scoring.hpp"

#include <optional>

namespace sentinel::anomaly {

namespace {

std::optional<std::size_t> first_hit(const std::vector<DetectionRecord>& records, const AnomalyWindow& w) {
    std::optional<std::size_t> best;
    for (const auto& r : records)
        if (r.verdict == Verdict::anomalous && r.index >= w.b && r.index <= w.e && (!best || r.index < *best))
            best = r.index;
    return best;
}

}  // namespace

DetectionScore score_detection(const std::vector<DetectionRecord>& records, const std::vector<AnomalyWindow>& golden) {
    std::size_t tp = 0;
    for (const auto& w : golden) tp += first_hit(records, w) ? 1 : 0;
    const std::size_t fn = golden.size() - tp;
    std::size_t fp = 0;
    for (const auto& r : records) {
        if (r.verdict != Verdict::anomalous) continue;
        bool inside = false;
        for (const auto& w : golden) inside = inside || (r.index >= w.b && r.index <= w.e);
        fp += inside ? 0 : 1;
    }
    DetectionScore s;
    s.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

double ed_score(const std::vector<DetectionRecord>& records, const std::vector<AnomalyWindow>& golden) {
    if (golden.empty()) return 0.0;
    double total = 0.0;
    for (const auto& w : golden) {
        if (w.e <= w.b) continue;
        if (const auto idx = first_hit(records, w))
            total += static_cast<double>(w.e - *idx) / static_cast<double>(w.e - w.b);
    }
    return total / static_cast<double>(golden.size());
}

}  // namespace sentinel::anomaly
