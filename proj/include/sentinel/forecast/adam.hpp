#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace sentinel::forecast {

/// Adam over a flat parameter vector (β₁ = 0.9, β₂ = 0.999, ε = 1e−8 by default).
class Adam {
public:
    Adam(Eigen::Index size, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps),
          m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)) {}

    /// Descent step: params -= lr · m̂ / (√v̂ + ε).
    void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad) {
        ++t_;
        m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
        v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
        const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
        params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
    }

private:
    double lr_, beta1_, beta2_, eps_;
    Eigen::VectorXd m_, v_;
    std::int64_t t_ = 0;
};

}  // namespace sentinel::forecast
