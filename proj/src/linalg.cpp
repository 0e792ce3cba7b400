#include "sentinel/linalg.hpp"

#include "sentinel/error.hpp"

#include <string>

namespace sentinel::linalg {

namespace {

bool usable(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return llt.info() == Eigen::Success && llt.rcond() > 1e-13;
}

}  // namespace

Eigen::LLT<Eigen::MatrixXd> factor_gram(const Eigen::MatrixXd& gram, double ridge) {
    if (ridge > 0.0) {
        Eigen::MatrixXd regularized = gram;
        regularized.diagonal().array() += ridge;
        Eigen::LLT<Eigen::MatrixXd> llt(regularized);
        if (usable(llt)) return llt;
    } else {
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (usable(llt)) return llt;
        const double scale = gram.size() > 0 ? std::max(1.0, gram.diagonal().cwiseAbs().maxCoeff()) : 1.0;
        Eigen::MatrixXd regularized = gram;
        regularized.diagonal().array() += kRidgeFallback * scale;
        Eigen::LLT<Eigen::MatrixXd> fallback(regularized);
        if (fallback.info() == Eigen::Success) return fallback;
    }
    throw FitError("least squares failed: singular design (" + std::to_string(gram.rows()) +
                   " regressors) after ridge fallback");
}

Eigen::MatrixXd solve_normal_equations(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& cross, double ridge) {
    Eigen::MatrixXd beta = factor_gram(gram, ridge).solve(cross);
    if (!beta.allFinite()) throw FitError("least squares produced non-finite coefficients");
    return beta;
}

Eigen::MatrixXd least_squares(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double ridge) {
    if (x.rows() != y.rows()) throw ArgumentError("least_squares: row mismatch");
    return solve_normal_equations(x.transpose() * x, x.transpose() * y, ridge);
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out(x.rows(), x.cols() + 1);
    out.col(0).setOnes();
    out.rightCols(x.cols()) = x;
    return out;
}

}  // namespace sentinel::linalg
