#include "sentinel/harness/experiment.hpp"

#include "sentinel/anomaly/scoring.hpp"
#include "sentinel/core/csv.hpp"
#include "sentinel/core/features.hpp"
#include "sentinel/core/split.hpp"
#include "sentinel/error.hpp"
#include "sentinel/intervals/interval.hpp"
#include "sentinel/intervals/metrics.hpp"
#include "sentinel/log.hpp"
#include "sentinel/preprocess/impute.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace sentinel::harness {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// First series row that receives a forecast.
std::size_t first_scored_row(const ExperimentConfig& c, std::size_t split) {
    return c.split.mode == core::SplitMode::holdout ? split + c.window : split;
}

core::MultivariateSeries impute_without_leakage(const core::MultivariateSeries& s, std::size_t split,
                                                const preprocess::ImputeOptions& options) {
    // Training rows are imputed from training rows alone; test rows may use
    // everything before them.
    const auto train = preprocess::impute_round_robin(s.slice(0, split), options);
    auto full = preprocess::impute_round_robin(s, options);
    MatrixXd values = full.values();
    values.topRows(static_cast<Index>(split)) = train.values();
    return s.with_values(std::move(values));
}

}  // namespace

double rmse(const MatrixXd& actuals, const MatrixXd& forecasts) {
    if (actuals.size() == 0) throw ArgumentError("rmse of an empty sample");
    if (actuals.rows() != forecasts.rows() || actuals.cols() != forecasts.cols())
        throw ArgumentError("rmse inputs differ in shape");
    return std::sqrt((actuals - forecasts).array().square().mean());
}

core::MultivariateSeries load_series(const ExperimentConfig& c) {
    core::MultivariateSeries s;
    if (c.data.path) {
        s = core::load_csv(*c.data.path, c.data.schema);
    } else {
        auto spec = *c.data.synthetic;
        spec.seed = synthetic_seed(c);
        s = seasonal_ar1(spec);
    }
    if (c.data.derive_submetering4) {
        s = core::derive_submetering4(s);
        if (const auto negative = core::count_negative(s, "sub_metering_4"))
            log::info("data quality: " + std::to_string(negative) + " negative sub_metering_4 values kept as-is");
    }
    if (c.data.resample_seconds > 0 && c.data.resample_seconds != s.step())
        s = core::resample_aggregate(s, c.data.resample_seconds, c.data.resample_aggregation);
    return s;
}

double PreparedData::to_raw(std::size_t row, double value) const {
    if (adjuster) value = adjuster->restore(row, value);
    if (scaler) value = scaler->unscale_value(model.target_index(), value);
    return value;
}

MatrixXd PreparedData::to_raw(const MatrixXd& values, const std::vector<std::size_t>& target_start) const {
    MatrixXd out(values.rows(), values.cols());
    for (Index i = 0; i < values.rows(); ++i)
        for (Index k = 0; k < values.cols(); ++k)
            out(i, k) = to_raw(target_start[static_cast<std::size_t>(i)] + static_cast<std::size_t>(k), values(i, k));
    return out;
}

InjectedSeries inject_span(const ExperimentConfig& c, const core::MultivariateSeries& series, std::size_t begin) {
    const std::size_t n = series.n_steps();
    if (begin >= n) throw ArgumentError("test span too short for anomaly injection");
    const auto clean = series.slice(begin, n);
    VectorXd delta = VectorXd::Zero(static_cast<Index>(n - begin));
    std::vector<anomaly::AnomalyWindow> taken;
    InjectedSeries out;
    for (const auto& inj : c.injections) {
        auto spec = inj.spec;
        spec.seed = injection_seed(c, inj);
        auto result = anomaly::inject_anomalies(clean, spec, taken);
        delta += result.series.target() - clean.target();
        taken.insert(taken.end(), result.labels.begin(), result.labels.end());
        for (auto i : result.affected) out.affected.push_back(i + begin);
    }
    std::sort(taken.begin(), taken.end(), [](const auto& a, const auto& b) { return a.b < b.b; });
    for (std::size_t k = 0; k < taken.size(); ++k) {
        auto w = taken[k];
        w.id = k;
        w.b += begin;
        w.e += begin;
        out.labels.push_back(w);
    }
    std::sort(out.affected.begin(), out.affected.end());
    VectorXd target = series.target();
    target.tail(delta.size()) += delta;
    out.series = series.with_target(target);
    return out;
}

PreparedData prepare(const ExperimentConfig& c, const core::MultivariateSeries& series) {
    PreparedData p;
    auto s = series;
    const std::size_t n = s.n_steps();
    p.split = core::split_index(s, c.split);

    if (!s.categorical().empty()) {
        std::vector<std::string> names;
        for (const auto& col : s.categorical()) names.push_back(col.name);
        p.encoder = preprocess::fit_encoder(s.slice(0, p.split), names);
        s = preprocess::apply_encoder(s, *p.encoder);
    }

    if (s.has_missing()) {
        if (!c.preprocess.impute) throw ImputationError("series has missing values and imputation is disabled");
        s = impute_without_leakage(s, p.split, c.preprocess.impute_options);
    }

    const std::size_t scored = first_scored_row(c, p.split);
    if (!c.injections.empty()) {
        auto injected = inject_span(c, s, scored);
        s = std::move(injected.series);
        p.labels = std::move(injected.labels);
        p.affected = std::move(injected.affected);
    } else if (c.labels_path) {
        p.labels = anomaly::read_labels_csv(*c.labels_path);
        for (const auto& w : p.labels)
            if (w.e > n) throw ArgumentError("golden label window ends beyond the series");
    }
    p.raw = s;

    auto model = s;
    if (c.preprocess.scale) {
        p.scaler = preprocess::fit_scaler(s.slice(0, p.split));
        model = preprocess::scale(model, *p.scaler);
    }
    if (c.preprocess.deseasonalize) {
        const VectorXd train_target = model.target().head(static_cast<Index>(p.split));
        p.adjuster = preprocess::SeasonalTrendAdjuster(train_target, c.preprocess.period,
                                                       preprocess::ClassicalDecomposer{});
        VectorXd target = model.target();
        for (Index t = 0; t < target.size(); ++t) target[t] = p.adjuster->remove(static_cast<std::size_t>(t), target[t]);
        model = model.with_target(target);
    }
    p.model = model;

    p.train = core::make_windows(model.slice(0, p.split), c.window, c.horizon, 1);
    if (c.split.mode == core::SplitMode::holdout) {
        p.test = core::make_windows(model.slice(p.split, n), c.window, c.horizon, 1);
        for (auto& t : p.test.target_start) t += p.split;
    } else {
        p.test = core::make_forecast_windows(model, p.split, c.window, c.horizon);
    }
    return p;
}

PreparedData prepare(const ExperimentConfig& c) { return prepare(c, load_series(c)); }

namespace {

// For each scored series row, the (window, step) cell with the shortest lead.
struct RowCell {
    std::size_t row;
    Index window;
    Index step;
};

std::vector<RowCell> shortest_lead_cells(const core::WindowedDataset& test) {
    std::map<std::size_t, RowCell> best;
    for (std::size_t i = 0; i < test.n_samples(); ++i)
        for (std::size_t k = 0; k < test.horizon; ++k) {
            const std::size_t row = test.target_start[i] + k;
            auto it = best.find(row);
            if (it == best.end() || static_cast<std::size_t>(it->second.step) > k)
                best[row] = {row, static_cast<Index>(i), static_cast<Index>(k)};
        }
    std::vector<RowCell> out;
    out.reserve(best.size());
    for (const auto& [row, cell] : best) out.push_back(cell);
    return out;
}

AlgorithmReport evaluate_algorithm(const ExperimentConfig& c, const PreparedData& p, const AlgorithmConfig& a,
                                   std::map<std::string, double>& timings) {
    AlgorithmReport r;
    r.name = a.name;
    r.kind = forecast::to_string(a.forecaster.kind);
    r.interval_method = intervals::to_string(a.interval);

    auto config = a.forecaster;
    config.seed = algorithm_seed(c, a);
    const auto& test = p.test;
    const Index rows = static_cast<Index>(test.n_samples());
    const Index h = static_cast<Index>(test.horizon);
    const VectorXd raw_target = p.raw.target();
    MatrixXd actual(rows, h);
    for (Index i = 0; i < rows; ++i)
        for (Index k = 0; k < h; ++k)
            actual(i, k) = raw_target[static_cast<Index>(test.target_start[static_cast<std::size_t>(i)]) + k];

    Stopwatch fit_clock;
    const auto model = forecast::fit(p.train, config);
    const MatrixXd point = p.to_raw(forecast::predict(model, test.inputs), test.target_start);
    timings["fit:" + a.name] = fit_clock.seconds();
    r.rmse = rmse(actual, point);
    if (!std::isfinite(r.rmse)) throw DivergenceError("non-finite forecasts");

    Stopwatch interval_clock;
    const auto seed = interval_seed(c, a);
    auto draws = a.interval == intervals::IntervalMethod::bootstrap
                     ? intervals::bootstrap_draws(model, p.train, test.inputs, c.reps, seed)
                     : intervals::mc_dropout_draws(model, test.inputs, c.reps, seed);
    for (auto& d : draws.draws) d = p.to_raw(d, test.target_start);
    r.bootstrap_discarded = draws.discarded;

    const auto cells = shortest_lead_cells(test);
    const auto& ts = p.raw.timestamps();
    for (const auto& cell : cells) {
        r.forecast_timestamps.push_back(ts[cell.row]);
        r.forecast.push_back(point(cell.window, cell.step));
    }

    std::optional<intervals::PredictionInterval> detector_bounds;
    for (double alpha : c.alphas) {
        const auto pi = intervals::percentile_bounds(draws, alpha, a.interval);
        const auto m = intervals::evaluate(pi.lower, pi.upper, actual, alpha);
        r.alphas.push_back({alpha, m.mis, std::nullopt, m.cs});
        IntervalTrace trace;
        trace.alpha = alpha;
        Index flat = 0;
        for (Index i = 0; i < rows; ++i)
            for (Index k = 0; k < h; ++k, ++flat) {
                trace.timestamps.push_back(ts[test.target_start[static_cast<std::size_t>(i)] + static_cast<std::size_t>(k)]);
                trace.lower.push_back(pi.lower(i, k));
                trace.upper.push_back(pi.upper(i, k));
                trace.actual.push_back(actual(i, k));
                trace.interval_score.push_back(m.interval_scores[flat]);
            }
        r.traces.push_back(std::move(trace));
        if (alpha == c.detector.alpha) detector_bounds = pi;
    }
    if (!detector_bounds) detector_bounds = intervals::percentile_bounds(draws, c.detector.alpha, a.interval);
    timings["intervals:" + a.name] = interval_clock.seconds();

    Stopwatch detect_clock;
    const Index m = static_cast<Index>(cells.size());
    VectorXd y(m), lo(m), hi(m);
    for (Index j = 0; j < m; ++j) {
        const auto& cell = cells[static_cast<std::size_t>(j)];
        y[j] = actual(cell.window, cell.step);
        lo[j] = detector_bounds->lower(cell.window, cell.step);
        hi[j] = detector_bounds->upper(cell.window, cell.step);
    }
    VectorXd history;
    if (c.prime_detector && !cells.empty()) history = raw_target.head(static_cast<Index>(cells.front().row));
    r.detections = anomaly::detect_series(y, lo, hi, c.detector, history);
    for (std::size_t j = 0; j < r.detections.size(); ++j) r.detections[j].index = cells[j].row;
    if (!p.labels.empty()) {
        DetectionMetrics d;
        const auto score = anomaly::score_detection(r.detections, p.labels);
        d.precision = score.precision;
        d.recall = score.recall;
        d.f1 = score.f1;
        d.ed_score = anomaly::ed_score(r.detections, p.labels);
        for (const auto& rec : r.detections) {
            d.n_anomalous += rec.verdict == anomaly::Verdict::anomalous;
            d.n_breach += rec.verdict != anomaly::Verdict::normal;
        }
        r.detection = d;
    }
    timings["detect:" + a.name] = detect_clock.seconds();
    return r;
}

void fill_smis(EvalReport& report, const std::vector<double>& alphas) {
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : report.algorithms)
            if (a.ok) best = std::min(best, a.alphas[j].mis);
        if (!(best > 0.0) || !std::isfinite(best)) {
            if (std::isfinite(best))
                log::warn("best MIS at alpha " + alpha_label(alphas[j]) + " is zero; sMIS left undefined");
            continue;
        }
        for (auto& a : report.algorithms)
            if (a.ok) a.alphas[j].smis = a.alphas[j].mis / best;
    }
}

}  // namespace

EvalReport run_experiment(const ExperimentConfig& c, const core::MultivariateSeries& series) {
    c.validate();
    EvalReport report;
    report.mode = c.split.mode == core::SplitMode::holdout ? "holdout" : "walk_forward";
    report.seed = c.seed;
    report.config = config_to_json(c);

    Stopwatch prep_clock;
    const auto p = prepare(c, series);
    report.runtime_seconds["preprocess"] = prep_clock.seconds();
    report.n_steps = p.raw.n_steps();
    report.n_train = p.split;
    report.n_test_windows = p.test.n_samples();
    report.golden = p.labels;
    report.timestamps = p.raw.timestamps();
    report.actual = p.raw.target();
    {
        std::ostringstream msg;
        msg << report.mode << ": " << report.n_steps << " steps, " << p.split << " train rows, "
            << report.n_test_windows << " test windows, " << p.labels.size() << " golden windows";
        log::info(msg.str());
    }

    for (const auto& a : c.algorithms) {
        log::info("evaluating '" + a.name + "' (" + forecast::to_string(a.forecaster.kind) + ")");
        try {
            report.algorithms.push_back(evaluate_algorithm(c, p, a, report.runtime_seconds));
        } catch (const std::exception& e) {
            AlgorithmReport failed;
            failed.name = a.name;
            failed.kind = forecast::to_string(a.forecaster.kind);
            failed.interval_method = intervals::to_string(a.interval);
            failed.ok = false;
            failed.error = e.what();
            log::warn("algorithm '" + a.name + "' failed: " + failed.error);
            report.algorithms.push_back(std::move(failed));
        }
    }
    fill_smis(report, c.alphas);
    return report;
}

EvalReport run_experiment(const ExperimentConfig& c) {
    c.validate();
    Stopwatch load_clock;
    const auto series = load_series(c);
    const double load_seconds = load_clock.seconds();
    auto report = run_experiment(c, series);
    report.runtime_seconds["load"] = load_seconds;
    return report;
}

EvalReport run_holdout(const ExperimentConfig& config) {
    auto c = config;
    c.split.mode = core::SplitMode::holdout;
    return run_experiment(c);
}

EvalReport run_walk_forward(const ExperimentConfig& config) {
    auto c = config;
    c.split.mode = core::SplitMode::walk_forward;
    return run_experiment(c);
}

}  // namespace sentinel::harness
