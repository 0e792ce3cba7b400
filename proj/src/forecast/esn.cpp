#include "sentinel/forecast/esn.hpp"

#include "sentinel/error.hpp"
#include "sentinel/random.hpp"

#include <Eigen/Eigenvalues>

#include <vector>

namespace sentinel::forecast {

using Eigen::Index;

Eigen::VectorXd Reservoir::step(const Eigen::VectorXd& state, const Eigen::VectorXd& input) const {
    return (input_weights * input + weights * state).array().tanh().matrix();
}

Eigen::VectorXd Reservoir::step(const Eigen::VectorXd& state) const {
    return (weights * state).array().tanh().matrix();
}

Eigen::MatrixXd Reservoir::final_states(const Eigen::MatrixXd& inputs, std::size_t window) const {
    const Index f = input_weights.cols();
    if (inputs.cols() != static_cast<Index>(window) * f)
        throw ArgumentError("ESN input width does not match window × features");
    // Batch all samples: states are N × B.
    Eigen::MatrixXd states = Eigen::MatrixXd::Zero(static_cast<Index>(size()), inputs.rows());
    for (std::size_t t = 0; t < window; ++t) {
        const Eigen::MatrixXd u = inputs.middleCols(static_cast<Index>(t) * f, f).transpose();
        Eigen::MatrixXd pre = input_weights * u;
        pre.noalias() += weights * states;
        states = pre.array().tanh().matrix();
    }
    return states.transpose();
}

double spectral_radius(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw FitError("eigenvalue computation failed");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Reservoir make_reservoir(std::size_t n_features, const EsnConfig& config, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    std::bernoulli_distribution present(config.density);
    const auto n = static_cast<Index>(config.reservoir_size);

    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r)
            if (present(rng)) dense(r, c) = weight(rng);
    const double radius = spectral_radius(dense);
    if (!(radius > 1e-12)) throw FitError("reservoir draw has zero spectral radius; raise density or size");
    dense *= config.spectral_radius / radius;

    Reservoir res;
    res.weights = dense.sparseView();
    res.weights.makeCompressed();
    res.input_weights.resize(n, static_cast<Index>(n_features));
    for (Index k = 0; k < res.input_weights.size(); ++k)
        res.input_weights.data()[k] = config.input_scaling * weight(rng);
    return res;
}

Eigen::MatrixXd esn_design(const Reservoir& reservoir, const Eigen::MatrixXd& inputs, std::size_t window,
                           std::size_t n_features) {
    const auto f = static_cast<Index>(n_features);
    const Eigen::MatrixXd states = reservoir.final_states(inputs, window);
    Eigen::MatrixXd design(inputs.rows(), 1 + f + states.cols());
    design.col(0).setOnes();
    design.middleCols(1, f) = inputs.rightCols(f);
    design.rightCols(states.cols()) = states;
    return design;
}

}  // namespace sentinel::forecast
