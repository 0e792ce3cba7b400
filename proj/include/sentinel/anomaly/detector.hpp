#pragma once

#include "sentinel/intervals/interval.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace sentinel::anomaly {

enum class Verdict { normal, breach, anomalous };

std::string to_string(Verdict v);

/// Which out-of-bounds observations reset the IS baseline.
enum class Baseline {
    last_breach,     // every observation outside its interval
    last_anomalous,  // only observations judged anomalous
};

struct DetectorParams {
    double alpha = 0.05;
    /// An out-of-bounds IS must be at least this multiple of the baseline IS.
    double is_ratio = 1.33;
    /// Deviation from the running mean must exceed this many running std.
    double sigma_multiplier = 10.0;
    /// Observations needed before the deviation test can pass.
    std::size_t warmup = 30;
    Baseline baseline = Baseline::last_breach;
    /// 0 = statistics over every past observation; otherwise a trailing window.
    std::size_t rolling_window = 0;
};

/// Running mean and population standard deviation of past observations.
class RunningStats {
public:
    explicit RunningStats(std::size_t window = 0) : window_(window) {}

    void push(double y);
    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double stddev() const;

private:
    std::size_t window_;
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    std::deque<double> recent_;
};

struct DetectorState {
    std::optional<double> last_breach_is;
    RunningStats stats;

    explicit DetectorState(std::size_t rolling_window = 0) : stats(rolling_window) {}

    std::size_t count() const noexcept { return stats.count(); }
    double rolling_mean() const noexcept { return stats.mean(); }
    double rolling_std() const { return stats.stddev(); }
};

struct DetectionRecord {
    std::size_t index = 0;
    Verdict verdict = Verdict::normal;
    /// Interval score; present iff the verdict is not normal.
    std::optional<double> is_value;
    /// |y − running mean| / running std before y joins the statistics
    /// (0 when there is no history, +inf when std is 0 and y differs).
    double deviation_sigmas = 0.0;
};

/// One step of the dynamic-threshold rule. Inside [L, U] → normal.
/// Otherwise the point is anomalous iff (no baseline yet OR IS ≥ ratio ·
/// baseline) AND, once warm-up is over, |y − mean| > multiplier · std;
/// else it is a breach. The state (baseline, running stats) is updated after
/// the verdict. Throws ArgumentError when L > U.
DetectionRecord detect_step(DetectorState& state, std::size_t index, double y, double lower, double upper,
                            const DetectorParams& params);

/// Sequential fold of detect_step from a fresh state. `history`, when
/// non-empty, primes the running statistics (e.g. with the training span)
/// without producing records.
std::vector<DetectionRecord> detect_series(const Eigen::VectorXd& actuals, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper, const DetectorParams& params,
                                           const Eigen::VectorXd& history = {});

/// Detects over the first horizon column of an interval.
std::vector<DetectionRecord> detect_series(const Eigen::VectorXd& actuals, const intervals::PredictionInterval& pi,
                                           const DetectorParams& params, const Eigen::VectorXd& history = {});

}  // namespace sentinel::anomaly
