#include "sentinel/preprocess/spectrum.hpp"

#include "sentinel/error.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace sentinel::preprocess {

namespace {
// FFTW planning is not thread-safe; execution is.
std::mutex planner_mutex;
}  // namespace

SpectrumFrame dft_magnitude(const Eigen::VectorXd& signal, double sample_spacing) {
    const auto n = static_cast<int>(signal.size());
    if (n < 2) throw ArgumentError("dft_magnitude needs at least 2 samples");
    if (!(sample_spacing > 0.0)) throw ArgumentError("sample spacing must be positive");
    const int bins = n / 2 + 1;
    std::vector<double> in(signal.data(), signal.data() + n);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(bins));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex);
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
    SpectrumFrame frame;
    frame.magnitudes.resize(bins);
    for (int k = 0; k < bins; ++k) frame.magnitudes[k] = std::abs(out[static_cast<std::size_t>(k)]);
    frame.bin_width = 1.0 / (static_cast<double>(n) * sample_spacing);
    return frame;
}

}  // namespace sentinel::preprocess
