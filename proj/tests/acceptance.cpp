// Acceptance run: one PASS/FAIL/SKIP line per criterion on standard output,
// exit status 1 if any criterion fails.

#include "sentinel/anomaly/detector.hpp"
#include "sentinel/anomaly/injection.hpp"
#include "sentinel/anomaly/scoring.hpp"
#include "sentinel/cli/cli.hpp"
#include "sentinel/core/windows.hpp"
#include "sentinel/error.hpp"
#include "sentinel/forecast/ccn.hpp"
#include "sentinel/forecast/esn.hpp"
#include "sentinel/forecast/lstm.hpp"
#include "sentinel/forecast/model.hpp"
#include "sentinel/harness/config.hpp"
#include "sentinel/harness/experiment.hpp"
#include "sentinel/harness/report.hpp"
#include "sentinel/intervals/interval.hpp"
#include "sentinel/intervals/metrics.hpp"
#include "sentinel/log.hpp"
#include "sentinel/random.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace sentinel;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

enum class Outcome { pass, fail, skip };

struct Result {
    Outcome outcome = Outcome::fail;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double sd = 1.0) {
    auto rng = make_rng(seed);
    std::normal_distribution<double> n(0.0, sd);
    MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

core::WindowedDataset tabular(const MatrixXd& x, const MatrixXd& y) {
    core::WindowedDataset d;
    d.inputs = x;
    d.targets = y;
    d.window = 1;
    d.horizon = static_cast<std::size_t>(y.cols());
    d.n_features = static_cast<std::size_t>(x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) d.target_start.push_back(static_cast<std::size_t>(i) + 1);
    return d;
}

core::WindowedDataset random_windows(std::size_t n, std::size_t features, std::size_t w, std::size_t h,
                                     std::uint64_t seed) {
    MatrixXd v = gaussian(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(features), seed, 0.3);
    for (Eigen::Index t = 1; t < v.rows(); ++t) v.row(t) += 0.7 * v.row(t - 1);
    std::vector<std::string> names;
    for (std::size_t f = 0; f < features; ++f) names.push_back("f" + std::to_string(f));
    return core::make_windows(core::MultivariateSeries::from_columns(v, names, 0, 60), w, h, 1);
}

forecast::ForecasterConfig mlr_config() {
    forecast::ForecasterConfig c;
    c.kind = forecast::ForecasterKind::mlr;
    c.window = 1;
    c.horizon = 1;
    return c;
}

anomaly::DetectionRecord anomalous_at(std::size_t i) {
    anomaly::DetectionRecord r;
    r.index = i;
    r.verdict = anomaly::Verdict::anomalous;
    r.is_value = 1.0;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_exe(const std::string& args) {
    const std::string cmd = "'" SENTINEL_EXE "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Criterion 1 -----------------------------------------------------------------

Result metric_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    auto rng = make_rng(20240501);
    std::normal_distribution<double> g(0.0, 3.0);
    std::uniform_real_distribution<double> a(0.001, 0.999);
    double worst = 0.0;
    const std::size_t n = 1000;
    MatrixXd l(n, 1), u(n, 1), y(n, 1);
    std::vector<double> alphas(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = g(rng), hi = g(rng);
        if (lo > hi) std::swap(lo, hi);
        const auto k = static_cast<Eigen::Index>(i);
        l(k, 0) = lo;
        u(k, 0) = hi;
        y(k, 0) = g(rng);
        alphas[i] = a(rng);
        const double got = intervals::interval_score(lo, hi, y(k, 0), alphas[i]);
        worst = std::max(worst, std::abs(got - oracle::interval_score(lo, hi, y(k, 0), alphas[i])));
    }
    // MIS against a brute-force mean, and the decomposition identity, at several alphas.
    double worst_mis = 0.0, worst_identity = 0.0;
    for (double alpha : {0.01, 0.05, 0.1, 0.25, 0.5}) {
        double sum = 0.0, width = 0.0, under = 0.0, over = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            sum += oracle::interval_score(l(k, 0), u(k, 0), y(k, 0), alpha);
            width += u(k, 0) - l(k, 0);
            under += y(k, 0) < l(k, 0) ? l(k, 0) - y(k, 0) : 0.0;
            over += y(k, 0) > u(k, 0) ? y(k, 0) - u(k, 0) : 0.0;
        }
        const double m = intervals::mis(l, u, y, alpha);
        worst_mis = std::max(worst_mis, std::abs(m - sum / double(n)));
        const double identity = width / double(n) + 2.0 / alpha * under / double(n) + 2.0 / alpha * over / double(n);
        worst_identity = std::max(worst_identity, std::abs(m - identity));
    }
    const double elapsed = seconds_since(t0);
    const bool ok = worst <= 1e-9 && worst_mis <= 1e-9 && worst_identity <= 1e-9 && elapsed < 1.0;
    return {ok ? Outcome::pass : Outcome::fail,
            "max |IS - ref| " + fmt(worst) + ", max |MIS - ref| " + fmt(worst_mis) + ", identity gap " +
                fmt(worst_identity) + ", " + fmt(elapsed) + " s (limits 1e-9, 1 s)"};
}

// Criterion 2 -----------------------------------------------------------------

Result trivial_ledger() {
    std::vector<std::string> failed;
    std::size_t total = 0;
    const auto check = [&](const std::string& name, const std::function<bool()>& f) {
        ++total;
        bool ok = false;
        try {
            ok = f();
        } catch (const std::exception& e) {
            failed.push_back(name + " (threw: " + e.what() + ")");
            return;
        }
        if (!ok) failed.push_back(name);
    };
    const auto col = [](std::initializer_list<double> v) {
        MatrixXd m(static_cast<Eigen::Index>(v.size()), 1);
        Eigen::Index i = 0;
        for (double x : v) m(i++, 0) = x;
        return m;
    };
    const auto throws = [](const std::function<void()>& f) {
        try {
            f();
        } catch (const Error&) {
            return true;
        }
        return false;
    };

    // Interval metrics.
    check("IS no breach = width", [] { return intervals::interval_score(0, 1, 0.5, 0.05) == 1.0; });
    check("IS upper breach = 5.0", [] { return std::abs(intervals::interval_score(0, 1, 1.2, 0.1) - 5.0) < 1e-12; });
    check("IS lower breach = 21.0", [] { return std::abs(intervals::interval_score(0, 1, -0.1, 0.01) - 21.0) < 1e-9; });
    check("IS with L > U rejected", [&] { return throws([] { intervals::interval_score(1, 0, 0.5, 0.1); }); });
    check("CS all inside = 1", [&] { return intervals::cs(col({0, 0}), col({1, 1}), col({0.2, 0.9})) == 1.0; });
    check("MIS all inside = mean width",
          [&] { return std::abs(intervals::mis(col({0, 0}), col({1, 3}), col({0.5, 2}), 0.1) - 2.0) < 1e-12; });
    check("CS none inside = 0", [&] { return intervals::cs(col({0, 0}), col({1, 1}), col({-1, 2})) == 0.0; });
    check("CS half inside = 0.5", [&] { return intervals::cs(col({0, 0}), col({1, 1}), col({0.5, 2})) == 0.5; });
    check("MIS of {1, 5} = 3",
          [&] { return std::abs(intervals::mis(col({0, 0}), col({1, 1}), col({0.5, 1.2}), 0.1) - 3.0) < 1e-12; });
    check("sMIS {A:2, B:4} = {1, 2}", [] {
        const auto s = intervals::smis({{"A", 2.0}, {"B", 4.0}});
        return s.at("A") == 1.0 && s.at("B") == 2.0;
    });
    check("sMIS single entry = 1", [] { return intervals::smis({{"A", 3.7}}).at("A") == 1.0; });

    // Percentiles and ensembles.
    check("identical draws collapse", [] {
        intervals::EnsembleDraws d;
        for (int r = 0; r < 20; ++r) d.draws.push_back(MatrixXd::Constant(3, 1, 2.5));
        const auto pi = intervals::percentile_bounds(d, 0.1);
        return (pi.lower.array() == 2.5).all() && (pi.upper.array() == 2.5).all();
    });
    check("quantile nesting alpha 0.5 inside 0.1", [] {
        intervals::EnsembleDraws d;
        for (std::uint64_t r = 0; r < 100; ++r) d.draws.push_back(gaussian(5, 1, r));
        const auto wide = intervals::percentile_bounds(d, 0.1), narrow = intervals::percentile_bounds(d, 0.5);
        return (wide.lower.array() <= narrow.lower.array()).all() && (wide.upper.array() >= narrow.upper.array()).all();
    });
    check("n_reps < 2 rejected", [&] {
        intervals::EnsembleDraws d;
        d.draws.push_back(MatrixXd::Zero(1, 1));
        return throws([&] { intervals::percentile_bounds(d, 0.1); });
    });
    const auto lstm_data = random_windows(120, 1, 6, 1, 3);
    forecast::ForecasterConfig rnn;
    rnn.kind = forecast::ForecasterKind::rnn;
    rnn.window = 6;
    rnn.horizon = 1;
    rnn.seed = 5;
    rnn.rnn.hidden_units = 4;
    rnn.rnn.epochs = 3;
    check("dropout 0 gives zero width at the point forecast", [&] {
        const auto m = forecast::fit(lstm_data, rnn);
        const auto pi = intervals::mc_dropout_interval(m, lstm_data.inputs, 0.1, 30, 1);
        return (pi.upper - pi.lower).cwiseAbs().maxCoeff() == 0.0 &&
               (pi.lower - forecast::predict(m, lstm_data.inputs)).cwiseAbs().maxCoeff() < 1e-12;
    });
    check("dropout fixed seed identical", [&] {
        auto c = rnn;
        c.rnn.dropout_rate = 0.3;
        const auto m = forecast::fit(lstm_data, c);
        const auto a = intervals::mc_dropout_interval(m, lstm_data.inputs, 0.1, 50, 9);
        const auto b = intervals::mc_dropout_interval(m, lstm_data.inputs, 0.1, 50, 9);
        return a.lower == b.lower && a.upper == b.upper;
    });
    check("zero residuals give zero-width bootstrap", [] {
        const MatrixXd x = gaussian(40, 1, 1);
        const MatrixXd y = (3.0 * x).array() - 1.0;
        const auto pi = intervals::bootstrap_interval(mlr_config(), tabular(x, y), gaussian(10, 1, 2), 0.1, 50, 3);
        return (pi.upper - pi.lower).cwiseAbs().maxCoeff() < 1e-9;
    });
    check("bootstrap fixed seed bit-identical", [] {
        const MatrixXd x = gaussian(60, 1, 4);
        const MatrixXd y = x + gaussian(60, 1, 5);
        const auto a = intervals::bootstrap_interval(mlr_config(), tabular(x, y), gaussian(10, 1, 6), 0.1, 80, 7);
        const auto b = intervals::bootstrap_interval(mlr_config(), tabular(x, y), gaussian(10, 1, 6), 0.1, 80, 7);
        return a.lower == b.lower && a.upper == b.upper;
    });

    // Detector.
    const auto warmed = [] {
        anomaly::DetectorState s;
        for (int i = 0; i < 40; ++i) s.stats.push(i % 2 == 0 ? 1.0 : -1.0);
        return s;
    };
    const anomaly::DetectorParams params;
    const double is12 = intervals::interval_score(-1, 1, 12, 0.05);
    check("inside is normal", [&] {
        auto s = warmed();
        return anomaly::detect_step(s, 0, 0.3, -1, 1, params).verdict == anomaly::Verdict::normal && s.count() == 41;
    });
    check("1.5x IS at 12 sigma is anomalous", [&] {
        auto s = warmed();
        s.last_breach_is = is12 / 1.5;
        return anomaly::detect_step(s, 0, 12, -1, 1, params).verdict == anomaly::Verdict::anomalous;
    });
    check("1.1x IS is only a breach", [&] {
        auto s = warmed();
        s.last_breach_is = is12 / 1.1;
        return anomaly::detect_step(s, 0, 12, -1, 1, params).verdict == anomaly::Verdict::breach;
    });
    check("all inside gives all normal", [&] {
        const VectorXd y = VectorXd::LinSpaced(100, -0.5, 0.5);
        for (const auto& r : anomaly::detect_series(y, VectorXd::Constant(100, -1), VectorXd::Constant(100, 1), params))
            if (r.verdict != anomaly::Verdict::normal) return false;
        return true;
    });

    // Injection.
    const auto series = core::MultivariateSeries::from_columns(gaussian(1000, 1, 8), {"y"}, 0, 3600);
    check("injection seeded", [&] {
        anomaly::InjectionSpec spec;
        spec.seed = 4;
        const auto a = anomaly::inject_anomalies(series, spec), b = anomaly::inject_anomalies(series, spec);
        return a.series == b.series && a.labels == b.labels;
    });
    check("magnitude 0 leaves the series unchanged", [&] {
        anomaly::InjectionSpec spec;
        spec.magnitude_sigmas = 0.0;
        const auto r = anomaly::inject_anomalies(series, spec);
        return r.series.values() == series.values() && r.labels.size() == 10;
    });

    // Scoring.
    const std::vector<anomaly::AnomalyWindow> two{{0, 10, 20, anomaly::AnomalyKind::collective},
                                                  {1, 40, 50, anomaly::AnomalyKind::collective}};
    check("perfect detection (1, 1, 1)", [&] {
        const auto s = anomaly::score_detection({anomalous_at(10), anomalous_at(41)}, two);
        return s.precision == 1.0 && s.recall == 1.0 && s.f1 == 1.0;
    });
    check("no detections (0, 0, 0)", [&] {
        const auto s = anomaly::score_detection({}, two);
        return s.precision == 0.0 && s.recall == 0.0 && s.f1 == 0.0;
    });
    check("one hit one stray (0.5, 0.5, 0.5)", [&] {
        const auto s = anomaly::score_detection({anomalous_at(15), anomalous_at(30)}, two);
        return s.precision == 0.5 && s.recall == 0.5 && s.f1 == 0.5;
    });
    check("Ed at b = 1", [&] { return anomaly::ed_score({anomalous_at(10)}, {two[0]}) == 1.0; });
    check("Ed at e = 0", [&] { return anomaly::ed_score({anomalous_at(20)}, {two[0]}) == 0.0; });
    check("Ed midpoint + miss = 0.25", [&] { return anomaly::ed_score({anomalous_at(15)}, two) == 0.25; });

    // Harness.
    check("rmse identical = 0", [&] { return harness::rmse(col({1, 2}), col({1, 2})) == 0.0; });
    check("rmse (0,0) vs (3,4)",
          [&] { return std::abs(harness::rmse(col({0, 0}), col({3, 4})) - std::sqrt(12.5)) < 1e-12; });
    check("80/20 of 100, w=3, h=1 gives 17 windows", [] {
        const auto c = harness::parse_config("window = 3\n[forecasters.persistence]\n[data.synthetic]\nn = 100\n"
                                             "[intervals]\nreps = 10\n");
        return harness::run_holdout(c).n_test_windows == 17;
    });
    check("28 test days at h=7 gives 4 windows", [] {
        const auto c = harness::parse_config("window = 7\nhorizon = 7\n[forecasters.persistence]\n[intervals]\n"
                                             "reps = 10\n[split]\nmode = \"walk_forward\"\n[data.synthetic]\n"
                                             "n = 140\nstep_seconds = 86400\n");
        return harness::run_walk_forward(c).n_test_windows == 4;
    });
    check("persistence on zero noise: rmse 0, cs 1", [] {
        const auto c = harness::parse_config("window = 4\n[forecasters.persistence]\n[intervals]\nreps = 10\n"
                                             "[data.synthetic]\nn = 10\n");
        const auto r = harness::run_experiment(
            c, core::MultivariateSeries::from_columns(MatrixXd::Constant(120, 1, 2.0), {"y"}, 0, 60));
        bool ok = r.algorithms[0].ok && r.algorithms[0].rmse == 0.0;
        for (const auto& m : r.algorithms[0].alphas) ok = ok && m.cs == 1.0;
        return ok;
    });
    const std::string two_algos = "seed = 4\nwindow = 8\n[data.synthetic]\nn = 400\n[intervals]\nreps = 30\n"
                                  "[forecasters.mlr]\n[forecasters.persistence]\n";
    check("two algorithms: sMIS minimum exactly 1", [&] {
        const auto r = harness::run_experiment(harness::parse_config(two_algos));
        for (std::size_t k = 0; k < 3; ++k) {
            double lowest = INFINITY;
            for (const auto& a : r.algorithms) lowest = std::min(lowest, a.alphas[k].smis.value_or(INFINITY));
            if (lowest != 1.0) return false;
        }
        return true;
    });
    check("zero alphas rejected", [&] {
        return throws([] {
            harness::parse_config("[data.synthetic]\n[intervals]\nalphas = []\n[forecasters.mlr]\n");
        });
    });
    check("2 algorithms x 3 alphas gives 6 CSVs and a JSON round trip", [&] {
        const auto r = harness::run_experiment(harness::parse_config(two_algos));
        const auto dir = fs::temp_directory_path() / "sentinel_acceptance_emit";
        fs::remove_all(dir);
        harness::emit_report(r, dir);
        std::size_t csvs = 0;
        for (const auto& e : fs::directory_iterator(dir)) csvs += e.path().filename().string().starts_with("intervals_");
        const bool round_trip = harness::read_report(dir / "report.json") == r;
        fs::remove_all(dir);
        return csvs == 6 && round_trip;
    });

    // CLI.
    check("no subcommand exits 2", [] { return run_exe("") == 2; });
    check("--alpha 1.5 rejected", [] { return run_exe("evaluate -c x.toml --alpha 1.5") == 2; });
    check("missing config exits 2", [] { return run_exe("evaluate -c /nonexistent/exp.toml") == 2; });

    std::string detail = std::to_string(total - failed.size()) + "/" + std::to_string(total) + " examples hold";
    for (const auto& f : failed) detail += "; failed: " + f;
    return {failed.empty() ? Outcome::pass : Outcome::fail, detail};
}

// Criterion 3 -----------------------------------------------------------------

Result gradient_check() {
    const auto t0 = std::chrono::steady_clock::now();
    forecast::ForecasterConfig c;
    c.kind = forecast::ForecasterKind::rnn;
    c.window = 5;
    c.horizon = 1;
    c.seed = 13;
    c.rnn.hidden_units = 8;
    const double err = forecast::gradient_check(c, random_windows(16, 3, 5, 1, 14));
    const double elapsed = seconds_since(t0);
    return {err < 1e-4 && elapsed < 10.0 ? Outcome::pass : Outcome::fail,
            "8 units, 5 steps: max relative error " + fmt(err) + ", " + fmt(elapsed) + " s (limits 1e-4, 10 s)"};
}

// Criterion 4 -----------------------------------------------------------------

Result esn_contract() {
    forecast::EsnConfig cfg;
    cfg.reservoir_size = 300;
    cfg.spectral_radius = 0.95;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto r = forecast::make_reservoir(2, cfg, seed);
        worst = std::max(worst, std::abs(forecast::spectral_radius(MatrixXd(r.weights)) - 0.95));
    }
    const auto r = forecast::make_reservoir(2, cfg, 99);
    VectorXd state = r.step(VectorXd::Zero(300), VectorXd::Constant(2, 1.0));
    const double start = state.norm();
    std::size_t steps = 0;
    while (state.norm() >= 1e-6 * start && steps < 1000) {
        state = r.step(state);
        ++steps;
    }
    const bool decayed = state.norm() < 1e-6 * start;
    return {worst <= 1e-6 && decayed ? Outcome::pass : Outcome::fail,
            "max |radius - 0.95| " + fmt(worst) + "; state fell below 1e-6 of its start after " +
                std::to_string(steps) + " zero-input steps (limits 1e-6, 1000)"};
}

// Criterion 5 -----------------------------------------------------------------

Result ccn_contract() {
    forecast::CcnConfig cfg;
    cfg.tol = 1e-6;
    cfg.max_hidden_units = 4;

    const MatrixXd x = gaussian(80, 3, 31);
    const MatrixXd linear = (x * (VectorXd(3) << 0.7, -1.2, 0.4).finished()).array() + 0.3;
    const auto lin = forecast::train_cascade(x, linear, cfg, 2);

    MatrixXd hard(80, 1);
    for (Eigen::Index i = 0; i < 80; ++i) hard(i, 0) = std::sin(2.0 * x(i, 0)) * x(i, 1) + std::abs(x(i, 2));
    bool monotone = true;
    std::size_t max_units = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto net = forecast::train_cascade(x, hard, cfg, seed);
        max_units = std::max(max_units, net.hidden.size());
        for (std::size_t k = 1; k < net.stage_mse.size(); ++k) monotone = monotone && net.stage_mse[k] <= net.stage_mse[k - 1];
    }
    const bool ok = lin.hidden.empty() && monotone && max_units <= cfg.max_hidden_units && max_units > 0;
    return {ok ? Outcome::pass : Outcome::fail,
            "linear target: " + std::to_string(lin.hidden.size()) + " units; nonlinear target: error " +
                (monotone ? "non-increasing" : "INCREASED") + " per unit, at most " + std::to_string(max_units) +
                " units (cap " + std::to_string(cfg.max_hidden_units) + ")"};
}

// Criterion 6 -----------------------------------------------------------------

Result bootstrap_calibration() {
    const auto t0 = std::chrono::steady_clock::now();
    const MatrixXd x = gaussian(200, 1, 601);
    const MatrixXd y = 2.0 * x + gaussian(200, 1, 602);
    const MatrixXd xt = gaussian(2000, 1, 603);
    const MatrixXd yt = 2.0 * xt + gaussian(2000, 1, 604);
    const auto pi = intervals::bootstrap_interval(mlr_config(), tabular(x, y), xt, 0.1, 500, 605);
    const double coverage = intervals::cs(pi.lower, pi.upper, yt);
    const double elapsed = seconds_since(t0);
    return {coverage >= 0.85 && coverage <= 0.95 && elapsed < 60.0 ? Outcome::pass : Outcome::fail,
            "CS " + fmt(coverage) + " on 2000 fresh points, " + fmt(elapsed) + " s (limits [0.85, 0.95], 60 s)"};
}

// Criterion 7 -----------------------------------------------------------------

Result detector_reference() {
    auto rng = make_rng(707);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Eigen::Index n = 10000;
    VectorXd y(n), l(n), up(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const double center = g(rng), half = 0.3 + 2.0 * u(rng);
        l[t] = center - half;
        up[t] = center + half;
        y[t] = 1.5 * g(rng);
        if (u(rng) < 0.01) y[t] += (u(rng) < 0.5 ? -1.0 : 1.0) * (10.0 + 40.0 * u(rng));
    }
    const anomaly::DetectorParams p;
    const auto got = anomaly::detect_series(y, l, up, p);
    const auto want = oracle::algorithm1({y.data(), y.data() + n}, {l.data(), l.data() + n},
                                         {up.data(), up.data() + n}, p.alpha, p.is_ratio, p.sigma_multiplier, p.warmup);
    std::size_t mismatches = 0, anomalous = 0, breaches = 0;
    for (std::size_t t = 0; t < want.size(); ++t) {
        const bool same = static_cast<int>(got[t].verdict) == static_cast<int>(want[t].verdict) &&
                          got[t].is_value == want[t].is && got[t].deviation_sigmas == want[t].deviation_sigmas;
        mismatches += !same;
        anomalous += got[t].verdict == anomaly::Verdict::anomalous;
        breaches += got[t].verdict == anomaly::Verdict::breach;
    }
    return {mismatches == 0 && got.size() == want.size() ? Outcome::pass : Outcome::fail,
            std::to_string(mismatches) + " mismatching records of " + std::to_string(n) + " (" +
                std::to_string(anomalous) + " anomalous, " + std::to_string(breaches) + " breaches), bit-exact compare"};
}

// Criterion 8 -----------------------------------------------------------------

const char* kEndToEnd = R"(window = 24
horizon = 1

[data.synthetic]
n = 5000
period = 24

[intervals]
alphas = [0.05]
reps = 500

[detector]
alpha = 0.05

[forecasters.esn]
kind = "esn"
interval = "bootstrap"

[injections.changepoint]
contamination = 0.0075
magnitude_sigmas = 15

[injections.contextual]
contamination = 0.0075
magnitude_sigmas = 15
)";

Result end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto c = harness::parse_config(kEndToEnd, {{"seed", std::to_string(seed)}});
        const auto r = harness::run_experiment(c);
        const auto& a = r.algorithms.front();
        if (!a.ok || !a.detection) {
            ok = false;
            detail += " seed " + std::to_string(seed) + ": failed (" + a.error + ");";
            continue;
        }
        ok = ok && a.detection->f1 >= 0.8 && a.detection->ed_score >= 0.5;
        detail += " seed " + std::to_string(seed) + ": F1 " + fmt(a.detection->f1) + " Ed " + fmt(a.detection->ed_score) + ";";
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 300.0;
    return {ok ? Outcome::pass : Outcome::fail,
            "ESN + bootstrap, alpha 0.05, 15 sigma, contamination 0.015:" + detail + " " + fmt(elapsed) +
                " s (limits F1 >= 0.8, Ed >= 0.5 on every seed, 300 s)"};
}

// Criterion 9 -----------------------------------------------------------------

Result determinism() {
    const auto dir = fs::temp_directory_path() / "sentinel_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "exp.toml") << "seed = 11\nwindow = 12\noutput_dir = \"out\"\n[data.synthetic]\nn = 800\n"
                                       "[intervals]\nreps = 100\n[forecasters.esn]\nreservoir_size = 50\n"
                                       "[forecasters.mlr]\n[forecasters.rnn]\nepochs = 3\ndropout_rate = 0.2\n"
                                       "[injections.collective]\ncontamination = 0.02\n";
    const std::string args = "evaluate -q -c '" + (dir / "exp.toml").string() + "'";
    const int c1 = run_exe(args);
    const auto first = slurp(dir / "out" / "report.json");
    const int c2 = run_exe(args);
    const auto second = slurp(dir / "out" / "report.json");
    fs::remove_all(dir);
    const bool files_same = c1 == 0 && c2 == 0 && !first.empty() && first == second;

    intervals::EnsembleDraws d;
    for (std::uint64_t r = 0; r < 500; ++r) d.draws.push_back(gaussian(50, 2, 900 + r));
    const auto before = intervals::percentile_bounds(d, 0.05);
    auto rng = make_rng(3);
    bool perm_same = true;
    for (int k = 0; k < 10; ++k) {
        std::shuffle(d.draws.begin(), d.draws.end(), rng);
        const auto after = intervals::percentile_bounds(d, 0.05);
        perm_same = perm_same && after.lower == before.lower && after.upper == before.upper;
    }
    return {files_same && perm_same ? Outcome::pass : Outcome::fail,
            std::string("report.json ") + (files_same ? "byte-identical" : "DIFFERS") + " across two evaluate runs (exit " +
                std::to_string(c1) + ", " + std::to_string(c2) + "); bounds " +
                (perm_same ? "bit-identical" : "CHANGED") + " under 10 draw permutations"};
}

// Criterion 10 ----------------------------------------------------------------

// Each dataset needs a user-written config at $SENTINEL_DATASETS/<name>.toml
// whose forecasters include one named "persistence".
Result public_datasets() {
    const char* root = std::getenv("SENTINEL_DATASETS");
    if (root == nullptr || !fs::is_directory(root))
        return {Outcome::skip, "public datasets not present (set SENTINEL_DATASETS to a directory of <dataset>.toml)"};
    const std::vector<std::pair<std::string, double>> expected{
        {"aqd", 30.0}, {"hpc", 465.0}, {"bsd", 94.0}, {"bds", 1.8}, {"ywb", 301.0}};
    bool ok = true, any = false;
    std::string detail;
    for (const auto& [name, want] : expected) {
        const auto path = fs::path(root) / (name + ".toml");
        if (!fs::exists(path)) continue;
        any = true;
        try {
            const auto c = harness::load_config(path);
            const auto prepared = harness::prepare(c);
            if (!prepared.raw.values().allFinite()) {
                ok = false;
                detail += " " + name + ": missing values after imputation;";
                continue;
            }
            const auto r = harness::run_experiment(c);
            const auto it = std::find_if(r.algorithms.begin(), r.algorithms.end(),
                                         [](const harness::AlgorithmReport& a) { return a.name == "persistence"; });
            if (it == r.algorithms.end() || !it->ok) {
                ok = false;
                detail += " " + name + ": no persistence result;";
                continue;
            }
            const double rel = std::abs(it->rmse - want) / want;
            ok = ok && rel <= 0.05;
            detail += " " + name + ": RMSE " + fmt(it->rmse) + " vs " + fmt(want) + ";";
        } catch (const std::exception& e) {
            ok = false;
            detail += " " + name + ": " + e.what() + ";";
        }
    }
    if (!any) return {Outcome::skip, "no <dataset>.toml found under " + std::string(root)};
    return {ok ? Outcome::pass : Outcome::fail, "persistence RMSE within 5%:" + detail};
}

}  // namespace

int main() {
    log::set_level(log::Level::quiet);
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"metric oracle equivalence", metric_oracle},
        {"trivial-case ledger", trivial_ledger},
        {"recurrent gradient check", gradient_check},
        {"ESN contract", esn_contract},
        {"CCN contract", ccn_contract},
        {"bootstrap calibration", bootstrap_calibration},
        {"detector reference equivalence", detector_reference},
        {"end-to-end synthetic detection", end_to_end},
        {"determinism", determinism},
        {"public dataset checks", public_datasets},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {Outcome::fail, std::string("threw: ") + e.what()};
        }
        const char* tag = r.outcome == Outcome::pass ? "PASS" : r.outcome == Outcome::fail ? "FAIL" : "SKIP";
        failures += r.outcome == Outcome::fail;
        std::cout << tag << " " << (i + 1) << " " << criteria[i].first << ": " << r.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
