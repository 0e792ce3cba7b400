#pragma once

#include "sentinel/anomaly/detector.hpp"
#include "sentinel/anomaly/injection.hpp"

#include <vector>

namespace sentinel::anomaly {

struct DetectionScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// A golden window is a true positive when at least one anomalous record
/// falls inside it; anomalous records outside every window are false
/// positives. Zero denominators give 0.
DetectionScore score_detection(const std::vector<DetectionRecord>& records, const std::vector<AnomalyWindow>& golden);

/// Mean over golden windows of (e − idx)/(e − b), idx = first anomalous
/// record index inside [b, e]; an undetected window scores 0.
double ed_score(const std::vector<DetectionRecord>& records, const std::vector<AnomalyWindow>& golden);

}  // namespace sentinel::anomaly
