#include "sentinel/intervals/metrics.hpp"

#include "sentinel/error.hpp"

#include <algorithm>
#include <cmath>

namespace sentinel::intervals {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
}

void check_shapes(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper, const Eigen::MatrixXd& actuals) {
    if (lower.rows() != upper.rows() || lower.cols() != upper.cols() || lower.rows() != actuals.rows() ||
        lower.cols() != actuals.cols())
        throw ArgumentError("interval bounds and actuals differ in shape");
}

}  // namespace

double interval_score(double lower, double upper, double actual, double alpha) {
    check_alpha(alpha);
    if (lower > upper) throw ArgumentError("interval lower bound exceeds upper bound");
    double score = upper - lower;
    if (actual < lower) score += (2.0 / alpha) * (lower - actual);
    if (actual > upper) score += (2.0 / alpha) * (actual - upper);
    return score;
}

IntervalMetrics evaluate(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper, const Eigen::MatrixXd& actuals,
                         double alpha) {
    check_alpha(alpha);
    check_shapes(lower, upper, actuals);
    if (actuals.size() == 0) throw ArgumentError("no points to score");
    IntervalMetrics m;
    m.alpha = alpha;
    m.interval_scores.resize(actuals.size());
    Eigen::Index inside = 0;
    // Row-major traversal: step by step, horizon within a step.
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < actuals.rows(); ++r)
        for (Eigen::Index c = 0; c < actuals.cols(); ++c, ++k) {
            const double y = actuals(r, c);
            m.interval_scores[k] = interval_score(lower(r, c), upper(r, c), y, alpha);
            inside += (lower(r, c) <= y && y <= upper(r, c)) ? 1 : 0;
        }
    m.mis = m.interval_scores.mean();
    m.cs = static_cast<double>(inside) / static_cast<double>(actuals.size());
    return m;
}

double mis(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper, const Eigen::MatrixXd& actuals, double alpha) {
    return evaluate(lower, upper, actuals, alpha).mis;
}

double cs(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper, const Eigen::MatrixXd& actuals) {
    check_shapes(lower, upper, actuals);
    if (actuals.size() == 0) throw ArgumentError("no points to score");
    const auto inside = ((lower.array() <= actuals.array()) && (actuals.array() <= upper.array())).count();
    return static_cast<double>(inside) / static_cast<double>(actuals.size());
}

std::map<std::string, double> smis(const std::map<std::string, double>& mis_by_algorithm) {
    if (mis_by_algorithm.empty()) throw ArgumentError("smis needs at least one algorithm");
    double best = INFINITY;
    for (const auto& [name, value] : mis_by_algorithm) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw ArgumentError("MIS of '" + name + "' must be positive and finite");
        best = std::min(best, value);
    }
    std::map<std::string, double> out;
    for (const auto& [name, value] : mis_by_algorithm) out[name] = value / best;
    return out;
}

}  // namespace sentinel::intervals
