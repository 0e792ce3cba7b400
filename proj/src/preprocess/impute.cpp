#include "sentinel/preprocess/impute.hpp"

#include "sentinel/error.hpp"
#include "sentinel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sentinel::preprocess {

namespace {

using core::is_missing;

// Regressor vector for row r of feature f: intercept followed by all other features.
void fill_regressors(const Eigen::MatrixXd& v, Eigen::Index r, Eigen::Index f, Eigen::VectorXd& x) {
    x[0] = 1.0;
    Eigen::Index k = 1;
    for (Eigen::Index c = 0; c < v.cols(); ++c)
        if (c != f) x[k++] = v(r, c);
}

double initial_fill(const Eigen::MatrixXd& v, const std::vector<bool>& missing, Eigen::Index f, bool past_only,
                    Eigen::MatrixXd& filled) {
    const Eigen::Index n = v.rows();
    const auto at = [&](Eigen::Index r) { return missing[static_cast<std::size_t>(r * v.cols() + f)]; };
    double sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index r = 0; r < n; ++r)
        if (!at(r)) {
            sum += v(r, f);
            ++count;
        }
    const double global_mean = sum / static_cast<double>(count);
    if (!past_only) {
        for (Eigen::Index r = 0; r < n; ++r)
            if (at(r)) filled(r, f) = global_mean;
        return global_mean;
    }
    // Expanding mean of earlier observations; leading gaps take the first observation.
    double first = 0.0;
    for (Eigen::Index r = 0; r < n; ++r)
        if (!at(r)) {
            first = v(r, f);
            break;
        }
    double run = 0.0;
    Eigen::Index seen = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
        if (at(r)) {
            filled(r, f) = seen > 0 ? run / static_cast<double>(seen) : first;
        } else {
            run += v(r, f);
            ++seen;
        }
    }
    return global_mean;
}

}  // namespace

core::MultivariateSeries impute_round_robin(const core::MultivariateSeries& series, const ImputeOptions& options) {
    const Eigen::MatrixXd& v = series.values();
    const Eigen::Index n = v.rows();
    const Eigen::Index p = v.cols();
    if (!series.has_missing()) return series;

    std::vector<bool> missing(static_cast<std::size_t>(n * p));
    std::vector<Eigen::Index> missing_count(static_cast<std::size_t>(p), 0);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < p; ++c)
            if (is_missing(v(r, c))) {
                missing[static_cast<std::size_t>(r * p + c)] = true;
                ++missing_count[static_cast<std::size_t>(c)];
            }
    bool any_complete = false;
    for (Eigen::Index c = 0; c < p; ++c) {
        const auto m = missing_count[static_cast<std::size_t>(c)];
        const auto& name = series.feature_names()[static_cast<std::size_t>(c)];
        if (m == n) throw ImputationError("feature '" + name + "' is entirely missing");
        if (2 * m >= n) throw ImputationError("feature '" + name + "' is at least half missing");
        any_complete = any_complete || m == 0;
    }
    if (!any_complete) throw ImputationError("no fully observed feature to regress on");

    Eigen::MatrixXd filled = v;
    std::vector<Eigen::Index> order;
    for (Eigen::Index c = 0; c < p; ++c)
        if (missing_count[static_cast<std::size_t>(c)] > 0) order.push_back(c);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return missing_count[static_cast<std::size_t>(a)] < missing_count[static_cast<std::size_t>(b)];
    });
    for (auto f : order) initial_fill(v, missing, f, options.past_only, filled);

    const auto is_gap = [&](Eigen::Index r, Eigen::Index f) { return missing[static_cast<std::size_t>(r * p + f)]; };
    Eigen::VectorXd x(p);
    for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
        double max_change = 0.0;
        for (auto f : order) {
            if (!options.past_only) {
                Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
                Eigen::VectorXd cross = Eigen::VectorXd::Zero(p);
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (is_gap(r, f)) continue;
                    fill_regressors(filled, r, f, x);
                    gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
                    cross += x * filled(r, f);
                }
                gram = gram.selfadjointView<Eigen::Lower>();
                const Eigen::VectorXd beta = linalg::solve_normal_equations(gram, cross);
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (!is_gap(r, f)) continue;
                    fill_regressors(filled, r, f, x);
                    const double next = x.dot(beta);
                    max_change = std::max(max_change, std::abs(next - filled(r, f)));
                    filled(r, f) = next;
                }
            } else {
                Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
                Eigen::VectorXd cross = Eigen::VectorXd::Zero(p);
                Eigen::Index observed = 0;
                for (Eigen::Index r = 0; r < n; ++r) {
                    fill_regressors(filled, r, f, x);
                    if (!is_gap(r, f)) {
                        gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
                        cross += x * filled(r, f);
                        ++observed;
                        continue;
                    }
                    if (observed == 0) continue;
                    const Eigen::MatrixXd full = gram.selfadjointView<Eigen::Lower>();
                    const Eigen::VectorXd beta = linalg::solve_normal_equations(full, cross);
                    const double next = x.dot(beta);
                    max_change = std::max(max_change, std::abs(next - filled(r, f)));
                    filled(r, f) = next;
                }
            }
        }
        if (max_change < options.tolerance) break;
    }
    if (!filled.allFinite()) throw ImputationError("imputation produced non-finite values");
    return series.with_values(std::move(filled));
}

}  // namespace sentinel::preprocess
