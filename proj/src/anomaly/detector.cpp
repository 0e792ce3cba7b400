#include "sentinel/anomaly/detector.hpp"

#include "sentinel/error.hpp"
#include "sentinel/intervals/metrics.hpp"

#include <cmath>
#include <limits>

namespace sentinel::anomaly {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::normal: return "normal";
        case Verdict::breach: return "breach";
        case Verdict::anomalous: return "anomalous";
    }
    return "unknown";
}

void RunningStats::push(double y) {
    if (window_ == 0) {
        // Welford.
        ++count_;
        const double delta = y - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (y - mean_);
        return;
    }
    recent_.push_back(y);
    if (recent_.size() > window_) recent_.pop_front();
    count_ = recent_.size();
    double sum = 0.0;
    for (double v : recent_) sum += v;
    mean_ = sum / static_cast<double>(count_);
    double ss = 0.0;
    for (double v : recent_) ss += (v - mean_) * (v - mean_);
    m2_ = ss;
}

double RunningStats::stddev() const {
    if (count_ == 0) return 0.0;
    return std::sqrt(std::max(0.0, m2_ / static_cast<double>(count_)));
}

DetectionRecord detect_step(DetectorState& state, std::size_t index, double y, double lower, double upper,
                            const DetectorParams& params) {
    if (lower > upper) throw ArgumentError("interval lower bound exceeds upper bound at step " + std::to_string(index));
    DetectionRecord rec;
    rec.index = index;
    const double mean = state.rolling_mean();
    const double sd = state.rolling_std();
    const double deviation = std::abs(y - mean);
    if (state.count() == 0) {
        rec.deviation_sigmas = 0.0;
    } else if (sd > 0.0) {
        rec.deviation_sigmas = deviation / sd;
    } else {
        rec.deviation_sigmas = deviation > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }

    if (lower <= y && y <= upper) {
        rec.verdict = Verdict::normal;
    } else {
        const double is = intervals::interval_score(lower, upper, y, params.alpha);
        rec.is_value = is;
        const bool escalated = !state.last_breach_is || is >= params.is_ratio * *state.last_breach_is;
        const bool beyond = state.count() >= params.warmup && deviation > params.sigma_multiplier * sd;
        rec.verdict = escalated && beyond ? Verdict::anomalous : Verdict::breach;
        if (params.baseline == Baseline::last_breach || rec.verdict == Verdict::anomalous) state.last_breach_is = is;
    }
    state.stats.push(y);
    return rec;
}

std::vector<DetectionRecord> detect_series(const Eigen::VectorXd& actuals, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper, const DetectorParams& params,
                                           const Eigen::VectorXd& history) {
    if (actuals.size() != lower.size() || actuals.size() != upper.size())
        throw ArgumentError("actuals and interval bounds differ in length");
    DetectorState state(params.rolling_window);
    for (Eigen::Index i = 0; i < history.size(); ++i) state.stats.push(history[i]);
    std::vector<DetectionRecord> out;
    out.reserve(static_cast<std::size_t>(actuals.size()));
    for (Eigen::Index i = 0; i < actuals.size(); ++i)
        out.push_back(detect_step(state, static_cast<std::size_t>(i), actuals[i], lower[i], upper[i], params));
    return out;
}

std::vector<DetectionRecord> detect_series(const Eigen::VectorXd& actuals, const intervals::PredictionInterval& pi,
                                           const DetectorParams& params, const Eigen::VectorXd& history) {
    if (pi.lower.cols() == 0) throw ArgumentError("empty prediction interval");
    return detect_series(actuals, pi.lower.col(0), pi.upper.col(0), params, history);
}

}  // namespace sentinel::anomaly
