#include "sentinel/harness/synthetic.hpp"

#include "sentinel/error.hpp"
#include "sentinel/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sentinel::harness {

core::MultivariateSeries seasonal_ar1(const SyntheticSpec& spec) {
    if (spec.n < 2 || spec.period == 0) throw ArgumentError("synthetic series needs n >= 2 and period >= 1");
    if (!(std::abs(spec.phi) < 1.0)) throw ArgumentError("AR(1) coefficient must satisfy |phi| < 1");
    auto rng = make_rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sd);
    std::normal_distribution<double> jitter(0.0, 0.05);
    const auto n = static_cast<Eigen::Index>(spec.n);
    Eigen::MatrixXd values(n, 1 + static_cast<Eigen::Index>(spec.exogenous));
    std::vector<std::string> names{"y"};
    for (std::size_t k = 1; k <= spec.exogenous; ++k) names.push_back("x" + std::to_string(k));
    double ar = 0.0;
    const double w = 2.0 * std::numbers::pi / static_cast<double>(spec.period);
    for (Eigen::Index t = 0; t < n; ++t) {
        ar = spec.phi * ar + noise(rng);
        const double phase = w * static_cast<double>(t);
        values(t, 0) = spec.amplitude * std::sin(phase) + ar;
        for (Eigen::Index k = 1; k < values.cols(); ++k) {
            const double harmonic = static_cast<double>((k + 1) / 2);
            values(t, k) = (k % 2 == 1 ? std::cos(harmonic * phase) : std::sin(harmonic * phase)) + jitter(rng);
        }
    }
    return core::MultivariateSeries::from_columns(std::move(values), std::move(names), 0, spec.step_seconds,
                                                  spec.start);
}

}  // namespace sentinel::harness
