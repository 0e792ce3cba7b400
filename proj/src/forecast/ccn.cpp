#include "sentinel/forecast/ccn.hpp"

#include "sentinel/error.hpp"
#include "sentinel/forecast/adam.hpp"
#include "sentinel/linalg.hpp"
#include "sentinel/random.hpp"

#include <cmath>
#include <string>

namespace sentinel::forecast {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::MatrixXd CascadeNetwork::features(const MatrixXd& inputs) const {
    const Index d = inputs.cols();
    const auto h = static_cast<Index>(hidden.size());
    MatrixXd z(inputs.rows(), 1 + d + h);
    z.col(0).setOnes();
    z.middleCols(1, d) = inputs;
    for (Index k = 0; k < h; ++k) {
        const auto& w = hidden[static_cast<std::size_t>(k)];
        if (w.size() != 1 + d + k) throw ArgumentError("cascade unit width does not match inputs");
        z.col(1 + d + k) = (z.leftCols(1 + d + k) * w).array().tanh().matrix();
    }
    return z;
}

Eigen::MatrixXd CascadeNetwork::predict(const MatrixXd& inputs) const { return features(inputs) * output; }

double candidate_correlation(const VectorXd& activation, const MatrixXd& residual) {
    const VectorXd v = activation.array() - activation.mean();
    const MatrixXd e = residual.rowwise() - residual.colwise().mean();
    return (v.transpose() * e).cwiseAbs().sum();
}

namespace {

double mse(const MatrixXd& residual) { return residual.squaredNorm() / static_cast<double>(residual.size()); }

// Trains one candidate's weights; returns its final score.
double train_candidate(const MatrixXd& z, const MatrixXd& residual, const CcnConfig& config, VectorXd& w) {
    const MatrixXd e = residual.rowwise() - residual.colwise().mean();
    Adam adam(w.size(), config.candidate_learning_rate);
    double best = -1.0;
    VectorXd best_w = w;
    std::size_t stale = 0;
    for (std::size_t step = 0; step < config.max_candidate_steps; ++step) {
        const VectorXd v = (z * w).array().tanh().matrix();
        const VectorXd centred = v.array() - v.mean();
        const Eigen::RowVectorXd cov = centred.transpose() * e;
        const double score = cov.cwiseAbs().sum();
        if (score > best * (1.0 + 1e-6) + 1e-15) {
            best = score;
            best_w = w;
            stale = 0;
        } else if (++stale >= config.patience) {
            break;
        }
        // dS/dw = Σ_p Σ_o sign(cov_o)(E_po − Ē_o)(1 − v_p²) z_p; the v̄ term cancels.
        const VectorXd signal = (e * cov.array().sign().matrix().transpose()).cwiseProduct(
            (1.0 - v.array().square()).matrix());
        const VectorXd grad = z.transpose() * signal;
        adam.step(w, -grad);  // ascent
    }
    w = best_w;
    return best;
}

}  // namespace

CascadeNetwork train_cascade(const MatrixXd& inputs, const MatrixXd& targets, const CcnConfig& config,
                             std::uint64_t seed) {
    CascadeNetwork net;
    MatrixXd z = net.features(inputs);
    net.output = linalg::least_squares(z, targets);
    MatrixXd residual = targets - z * net.output;
    double error = mse(residual);
    net.stage_mse.push_back(error);

    while (error >= config.tol && net.hidden.size() < config.max_hidden_units) {
        const double s = 1.0 / std::sqrt(static_cast<double>(z.cols()));
        VectorXd best_w;
        double best_score = -1.0;
        for (std::size_t c = 0; c < config.candidate_pool; ++c) {
            auto rng = make_rng(stage_seed(seed, "ccn.unit" + std::to_string(net.hidden.size()) + ".cand" +
                                                     std::to_string(c)));
            std::uniform_real_distribution<double> init(-s, s);
            VectorXd w(z.cols());
            for (Index k = 0; k < w.size(); ++k) w[k] = init(rng);
            const double score = train_candidate(z, residual, config, w);
            if (score > best_score) {
                best_score = score;
                best_w = w;
            }
        }
        MatrixXd z_next(z.rows(), z.cols() + 1);
        z_next.leftCols(z.cols()) = z;
        z_next.col(z.cols()) = (z * best_w).array().tanh().matrix();
        const MatrixXd out_next = linalg::least_squares(z_next, targets);
        const MatrixXd residual_next = targets - z_next * out_next;
        const double error_next = mse(residual_next);
        if (!std::isfinite(error_next)) throw FitError("cascade output solve produced non-finite error");
        if (!(error_next < error)) break;
        net.hidden.push_back(best_w);
        net.output = out_next;
        z = std::move(z_next);
        residual = residual_next;
        error = error_next;
        net.stage_mse.push_back(error);
    }
    return net;
}

}  // namespace sentinel::forecast
