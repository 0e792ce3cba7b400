#pragma once

#include <Eigen/Dense>

namespace sentinel::preprocess {

/// DFT magnitudes of a real signal, bins 0..⌊n/2⌋.
struct SpectrumFrame {
    Eigen::VectorXd magnitudes;
    /// Frequency spacing between bins, in cycles per unit of `sample_spacing`.
    double bin_width = 0.0;
};

/// Throws ArgumentError for fewer than two samples.
SpectrumFrame dft_magnitude(const Eigen::VectorXd& signal, double sample_spacing = 1.0);

}  // namespace sentinel::preprocess
