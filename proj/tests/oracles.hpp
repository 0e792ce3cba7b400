#pragma once

// Independent reference implementations used as test oracles. Deliberately
// plain: loops over std::vector, no Eigen, no library code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double interval_score(double l, double u, double y, double alpha) {
    const double below = y < l ? l - y : 0.0;
    const double above = y > u ? y - u : 0.0;
    return (u - l) + 2.0 / alpha * below + 2.0 / alpha * above;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) throw std::runtime_error("singular system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// OLS with intercept via hand-built normal equations. Returns [b0, b1, ...].
inline std::vector<double> ols(const Matrix& rows, const std::vector<double>& y) {
    const std::size_t p = rows.front().size() + 1;
    Matrix xtx(p, std::vector<double>(p, 0.0));
    std::vector<double> xty(p, 0.0);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        std::vector<double> x{1.0};
        x.insert(x.end(), rows[t].begin(), rows[t].end());
        for (std::size_t i = 0; i < p; ++i) {
            xty[i] += x[i] * y[t];
            for (std::size_t j = 0; j < p; ++j) xtx[i][j] += x[i] * x[j];
        }
    }
    return solve(xtx, xty);
}

inline std::vector<double> dft_magnitude(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> out(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::complex<double> sum = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            sum += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(t) / double(n));
        out[k] = std::abs(sum);
    }
    return out;
}

// Linear-interpolation percentile of an unsorted sample (type-7 convention).
inline double percentile(std::vector<double> sample, double q) {
    std::sort(sample.begin(), sample.end());
    const double h = (double(sample.size()) - 1.0) * q;
    const double lo = std::floor(h);
    const double hi = std::ceil(h);
    return sample[std::size_t(lo)] + (h - lo) * (sample[std::size_t(hi)] - sample[std::size_t(lo)]);
}

enum class Verdict { normal, breach, anomalous };

struct Record {
    Verdict verdict;
    std::optional<double> is;
    double deviation_sigmas;
};

// Algorithm 1 as read here: baseline = last out-of-bounds IS, the first
// breach passes the ratio test, |y - mean| > k·std over all past values,
// warm-up before the deviation test may pass. Textbook Welford statistics.
inline std::vector<Record> algorithm1(const std::vector<double>& y, const std::vector<double>& l,
                                      const std::vector<double>& u, double alpha, double ratio = 1.33,
                                      double k = 10.0, std::size_t warmup = 30) {
    std::vector<Record> out;
    std::optional<double> last;
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double sd = n == 0 ? 0.0 : std::sqrt(std::max(0.0, m2 / double(n)));
        const double dev = std::abs(y[t] - mean);
        Record r{Verdict::normal, std::nullopt, 0.0};
        if (n > 0) r.deviation_sigmas = sd > 0.0 ? dev / sd : (dev > 0.0 ? INFINITY : 0.0);
        if (y[t] < l[t] || y[t] > u[t]) {
            const double is = interval_score(l[t], u[t], y[t], alpha);
            r.is = is;
            const bool first_or_escalated = !last.has_value() || is >= ratio * *last;
            const bool chebyshev = n >= warmup && dev > k * sd;
            r.verdict = first_or_escalated && chebyshev ? Verdict::anomalous : Verdict::breach;
            last = is;
        }
        ++n;
        const double delta = y[t] - mean;
        mean += delta / double(n);
        m2 += delta * (y[t] - mean);
        out.push_back(r);
    }
    return out;
}

}  // namespace oracle
