#pragma once

#include <Eigen/Dense>

namespace sentinel::linalg {

inline constexpr double kRidgeFallback = 1e-8;

/// Cholesky factor of XᵀX + ridge·I. A positive `ridge` is always applied;
/// with ridge == 0 a singular Gram matrix falls back to kRidgeFallback
/// (relative to the largest diagonal entry). Throws FitError if that fails too.
Eigen::LLT<Eigen::MatrixXd> factor_gram(const Eigen::MatrixXd& gram, double ridge = 0.0);

/// Least squares X·B ≈ Y through the normal equations (see factor_gram).
Eigen::MatrixXd least_squares(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double ridge = 0.0);

/// Same, from precomputed XᵀX and XᵀY.
Eigen::MatrixXd solve_normal_equations(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& cross,
                                       double ridge = 0.0);

/// Prepends a column of ones.
Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x);

}  // namespace sentinel::linalg
