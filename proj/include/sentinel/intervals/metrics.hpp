#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>

namespace sentinel::intervals {

/// (U − L) + (2/α)(L − y)·[y < L] + (2/α)(y − U)·[y > U].
/// Throws ArgumentError when L > U or α ∉ (0, 1).
double interval_score(double lower, double upper, double actual, double alpha);

struct IntervalMetrics {
    double mis = 0.0;
    double cs = 0.0;
    Eigen::VectorXd interval_scores;  // per scored point
    double alpha = 0.0;
};

/// Mean interval score over all points; every cell of a multi-step horizon
/// is scored on its own and averaged. Throws ArgumentError on shape mismatch.
double mis(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper, const Eigen::MatrixXd& actuals, double alpha);

/// Fraction of points with L ≤ y ≤ U.
double cs(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper, const Eigen::MatrixXd& actuals);

IntervalMetrics evaluate(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper, const Eigen::MatrixXd& actuals,
                         double alpha);

/// Each MIS divided by the smallest; the best algorithm (and any tie) maps
/// to exactly 1. Throws ArgumentError on an empty map or non-positive MIS.
std::map<std::string, double> smis(const std::map<std::string, double>& mis_by_algorithm);

}  // namespace sentinel::intervals
