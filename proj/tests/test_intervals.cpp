#include "sentinel/core/windows.hpp"
#include "sentinel/error.hpp"
#include "sentinel/forecast/model.hpp"
#include "sentinel/intervals/interval.hpp"
#include "sentinel/intervals/metrics.hpp"
#include "sentinel/random.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <numbers>

using namespace sentinel;
using namespace sentinel::intervals;
using core::WindowedDataset;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Catch::Matchers::WithinAbs;

namespace {

MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double sd = 1.0) {
    auto rng = make_rng(seed);
    std::normal_distribution<double> n(0.0, sd);
    MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

WindowedDataset tabular(const MatrixXd& x, const MatrixXd& y) {
    WindowedDataset d;
    d.inputs = x;
    d.targets = y;
    d.window = 1;
    d.horizon = static_cast<std::size_t>(y.cols());
    d.n_features = static_cast<std::size_t>(x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) d.target_start.push_back(static_cast<std::size_t>(i) + 1);
    return d;
}

forecast::ForecasterConfig mlr_config() {
    forecast::ForecasterConfig c;
    c.kind = forecast::ForecasterKind::mlr;
    c.window = 1;
    c.horizon = 1;
    return c;
}

EnsembleDraws draws_from(const std::vector<std::vector<double>>& per_cell_samples) {
    // per_cell_samples[cell][rep] → draws[rep](cell, 0)
    EnsembleDraws d;
    const std::size_t reps = per_cell_samples.front().size();
    for (std::size_t r = 0; r < reps; ++r) {
        MatrixXd m(static_cast<Eigen::Index>(per_cell_samples.size()), 1);
        for (std::size_t c = 0; c < per_cell_samples.size(); ++c) m(static_cast<Eigen::Index>(c), 0) = per_cell_samples[c][r];
        d.draws.push_back(m);
        d.seeds.push_back(r);
    }
    return d;
}

MatrixXd col(std::initializer_list<double> v) {
    MatrixXd m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

}  // namespace

TEST_CASE("interval score examples") {
    CHECK_THAT(interval_score(0, 1, 0.5, 0.05), WithinAbs(1.0, 1e-12));
    CHECK_THAT(interval_score(0, 1, 1.2, 0.1), WithinAbs(5.0, 1e-12));
    CHECK_THAT(interval_score(0, 1, -0.1, 0.01), WithinAbs(21.0, 1e-9));
    CHECK_THROWS_AS(interval_score(1, 0, 0.5, 0.1), ArgumentError);
    CHECK_THROWS_AS(interval_score(0, 1, 0.5, 0.0), ArgumentError);
    CHECK_THROWS_AS(interval_score(0, 1, 0.5, 1.0), ArgumentError);
}

TEST_CASE("interval score is at least the width") {
    auto rng = make_rng(3);
    std::normal_distribution<double> n(0.0, 2.0);
    std::uniform_real_distribution<double> a(0.005, 0.5);
    for (int i = 0; i < 5000; ++i) {
        double l = n(rng), u = n(rng);
        if (l > u) std::swap(l, u);
        const double y = n(rng), alpha = a(rng);
        const double s = interval_score(l, u, y, alpha);
        CHECK(s >= u - l);
        CHECK((s == u - l) == (y >= l && y <= u));
        CHECK_THAT(s, WithinAbs(oracle::interval_score(l, u, y, alpha), 1e-9 * std::max(1.0, s)));
    }
}

TEST_CASE("mis and cs") {
    const MatrixXd l = col({0, 0}), u = col({1, 2});
    SECTION("all inside") {
        CHECK(cs(l, u, col({0.5, 1.0})) == 1.0);
        CHECK_THAT(mis(l, u, col({0.5, 1.0}), 0.1), WithinAbs(1.5, 1e-12));
    }
    SECTION("none inside") { CHECK(cs(l, u, col({-1, 3})) == 0.0); }
    SECTION("half inside") { CHECK(cs(l, u, col({0.5, 3})) == 0.5); }
    SECTION("scores 1 and 5 average to 3") {
        // Second step: width 1, 0.2 above at α = 0.1 → 5.
        CHECK_THAT(mis(col({0, 0}), col({1, 1}), col({0.5, 1.2}), 0.1), WithinAbs(3.0, 1e-12));
    }
    SECTION("bounds are inclusive") { CHECK(cs(l, u, col({0.0, 2.0})) == 1.0); }
    SECTION("shape mismatch") {
        CHECK_THROWS_AS(mis(l, u, col({1, 2, 3}), 0.1), ArgumentError);
        CHECK_THROWS_AS(cs(l, col({1}), col({1, 2})), ArgumentError);
    }
    SECTION("evaluate bundles both") {
        const auto m = evaluate(l, u, col({0.5, 3}), 0.1);
        CHECK(m.cs == 0.5);
        CHECK(m.interval_scores.size() == 2);
        CHECK_THAT(m.mis, WithinAbs(m.interval_scores.mean(), 1e-12));
    }
}

TEST_CASE("mis decomposes into width and penalties") {
    const MatrixXd center = gaussian(300, 3, 1);
    const MatrixXd half = gaussian(300, 3, 2).cwiseAbs();
    const MatrixXd l = center - half, u = center + half;
    const MatrixXd y = gaussian(300, 3, 4, 1.5);
    for (double alpha : {0.01, 0.05, 0.1, 0.3}) {
        const double width = (u - l).mean();
        const double under = (l - y).cwiseMax(0.0).mean();
        const double over = (y - u).cwiseMax(0.0).mean();
        const double expected = width + 2.0 / alpha * under + 2.0 / alpha * over;
        CHECK_THAT(mis(l, u, y, alpha), WithinAbs(expected, 1e-9));
        CHECK(mis(l, u, y, alpha) >= width);
    }
}

TEST_CASE("smis") {
    const auto s = smis({{"A", 2.0}, {"B", 4.0}});
    CHECK(s.at("A") == 1.0);
    CHECK(s.at("B") == 2.0);
    CHECK(smis({{"only", 7.3}}).at("only") == 1.0);

    const auto tied = smis({{"A", 3.0}, {"B", 3.0}, {"C", 4.5}});
    CHECK(tied.at("A") == 1.0);
    CHECK(tied.at("B") == 1.0);
    CHECK(tied.at("C") == 1.5);

    CHECK_THROWS_AS(smis({}), ArgumentError);
    CHECK_THROWS_AS(smis({{"A", 0.0}, {"B", 1.0}}), ArgumentError);
    CHECK_THROWS_AS(smis({{"A", -1.0}}), ArgumentError);
}

TEST_CASE("smis reproduces a published ratio") {
    // Air-quality results at α = 0.1: LSTM holds the best MIS, SARIMAX sits 7.78% above it.
    const double lstm = 2.5;
    const auto s = smis({{"LSTM", lstm}, {"SARIMAX", lstm * 1.0778}});
    CHECK(s.at("LSTM") == 1.0);
    CHECK_THAT(s.at("SARIMAX"), WithinAbs(1.0778, 1e-12));
}

TEST_CASE("exactly the best algorithms map to one") {
    auto rng = make_rng(9);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::map<std::string, double> m;
        for (int k = 0; k < 5; ++k) m["a" + std::to_string(k)] = u(rng);
        const double best = std::min_element(m.begin(), m.end(), [](auto& a, auto& b) { return a.second < b.second; })->second;
        for (const auto& [name, v] : smis(m)) {
            CHECK((v == 1.0) == (m.at(name) == best));
            CHECK(v >= 1.0);
        }
    }
}

TEST_CASE("percentile bounds") {
    SECTION("identical draws collapse") {
        const auto pi = percentile_bounds(draws_from({std::vector<double>(50, 3.25)}), 0.1);
        CHECK(pi.lower(0, 0) == 3.25);
        CHECK(pi.upper(0, 0) == 3.25);
    }
    SECTION("1..100 at α = 0.1") {
        std::vector<double> s(100);
        for (int i = 0; i < 100; ++i) s[static_cast<std::size_t>(i)] = i + 1;
        const auto pi = percentile_bounds(draws_from({s}), 0.1);
        CHECK_THAT(pi.lower(0, 0), WithinAbs(oracle::percentile(s, 0.05), 1e-12));
        CHECK_THAT(pi.upper(0, 0), WithinAbs(oracle::percentile(s, 0.95), 1e-12));
        CHECK_THAT(pi.lower(0, 0), WithinAbs(5.95, 1e-12));
        CHECK_THAT(pi.upper(0, 0), WithinAbs(95.05, 1e-12));
        CHECK(pi.alpha == 0.1);
    }
    SECTION("random cells match the oracle") {
        const MatrixXd g = gaussian(40, 237, 5);
        std::vector<std::vector<double>> cells(40);
        for (Eigen::Index c = 0; c < 40; ++c)
            for (Eigen::Index r = 0; r < 237; ++r) cells[static_cast<std::size_t>(c)].push_back(g(c, r));
        for (double alpha : {0.01, 0.05, 0.1, 0.5}) {
            const auto pi = percentile_bounds(draws_from(cells), alpha);
            for (std::size_t c = 0; c < cells.size(); ++c) {
                const auto i = static_cast<Eigen::Index>(c);
                CHECK_THAT(pi.lower(i, 0), WithinAbs(oracle::percentile(cells[c], alpha / 2), 1e-12));
                CHECK_THAT(pi.upper(i, 0), WithinAbs(oracle::percentile(cells[c], 1 - alpha / 2), 1e-12));
            }
        }
    }
    SECTION("nesting") {
        const MatrixXd g = gaussian(30, 101, 6);
        std::vector<std::vector<double>> cells(30);
        for (Eigen::Index c = 0; c < 30; ++c)
            for (Eigen::Index r = 0; r < 101; ++r) cells[static_cast<std::size_t>(c)].push_back(g(c, r));
        const auto d = draws_from(cells);
        const std::vector<double> alphas{0.01, 0.05, 0.1, 0.2, 0.5};
        for (std::size_t k = 0; k + 1 < alphas.size(); ++k) {
            const auto wide = percentile_bounds(d, alphas[k]);
            const auto narrow = percentile_bounds(d, alphas[k + 1]);
            CHECK((wide.lower.array() <= narrow.lower.array()).all());
            CHECK((wide.upper.array() >= narrow.upper.array()).all());
            CHECK((narrow.lower.array() <= narrow.upper.array()).all());
        }
    }
    SECTION("draw order does not matter") {
        EnsembleDraws d;
        for (std::uint64_t r = 0; r < 200; ++r) d.draws.push_back(gaussian(12, 3, 100 + r));
        const auto before = percentile_bounds(d, 0.05);
        auto rng = make_rng(1);
        for (int trial = 0; trial < 5; ++trial) {
            std::shuffle(d.draws.begin(), d.draws.end(), rng);
            const auto after = percentile_bounds(d, 0.05);
            CHECK(after.lower == before.lower);
            CHECK(after.upper == before.upper);
        }
    }
    SECTION("errors") {
        CHECK_THROWS_AS(percentile_bounds(draws_from({{1.0}}), 0.1), ArgumentError);
        CHECK_THROWS_AS(percentile_bounds(EnsembleDraws{}, 0.1), ArgumentError);
        CHECK_THROWS_AS(percentile_bounds(draws_from({{1.0, 2.0}}), 1.5), ArgumentError);
        EnsembleDraws ragged;
        ragged.draws = {MatrixXd::Zero(2, 1), MatrixXd::Zero(3, 1)};
        CHECK_THROWS_AS(percentile_bounds(ragged, 0.1), ArgumentError);
    }
}

TEST_CASE("mc dropout intervals") {
    // Small sine-plus-noise series, windowed, fit with an LSTM.
    const Eigen::Index n = 400;
    MatrixXd v(n, 1);
    const MatrixXd noise = gaussian(n, 1, 11, 0.1);
    for (Eigen::Index t = 0; t < n; ++t) v(t, 0) = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0) + noise(t, 0);
    const auto all = core::make_windows(core::MultivariateSeries::from_columns(v, {"y"}, 0, 60), 8, 1, 1);
    const auto train = all.subset(0, 300);
    const auto test = all.subset(300, all.n_samples());

    forecast::ForecasterConfig c;
    c.kind = forecast::ForecasterKind::rnn;
    c.window = 8;
    c.horizon = 1;
    c.seed = 4;
    c.rnn.hidden_units = 8;
    c.rnn.epochs = 20;
    c.rnn.batch_size = 16;
    c.rnn.learning_rate = 0.01;

    SECTION("rate zero gives a zero-width band at the point forecast") {
        c.rnn.dropout_rate = 0.0;
        const auto model = forecast::fit(train, c);
        const auto pi = mc_dropout_interval(model, test.inputs, 0.1, 50, 3);
        const MatrixXd point = forecast::predict(model, test.inputs);
        CHECK((pi.upper - pi.lower).cwiseAbs().maxCoeff() == 0.0);
        CHECK((pi.lower - point).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(pi.method == IntervalMethod::dropout);
    }
    SECTION("seeded and rep-count stable") {
        c.rnn.dropout_rate = 0.2;
        const auto model = forecast::fit(train, c);
        const auto a = mc_dropout_interval(model, test.inputs, 0.1, 200, 42);
        const auto b = mc_dropout_interval(model, test.inputs, 0.1, 200, 42);
        CHECK(a.lower == b.lower);
        CHECK(a.upper == b.upper);
        CHECK((a.upper - a.lower).minCoeff() > 0.0);

        const auto d = mc_dropout_draws(model, test.inputs, 20, 42);
        REQUIRE(d.n_reps() == 20);
        for (std::size_t r = 0; r < 20; ++r) CHECK(d.seeds[r] == 42 + r);

        const auto p500 = mc_dropout_interval(model, test.inputs, 0.1, 500, 8);
        const auto p1000 = mc_dropout_interval(model, test.inputs, 0.1, 1000, 8);
        const double cs500 = cs(p500.lower, p500.upper, test.targets);
        const double cs1000 = cs(p1000.lower, p1000.upper, test.targets);
        CHECK(std::abs(cs500 - cs1000) < 0.03);
    }
    SECTION("non-rnn models are rejected") {
        auto m = mlr_config();
        m.window = 8;
        const auto model = forecast::fit(train, m);
        CHECK_THROWS_AS(mc_dropout_interval(model, test.inputs, 0.1, 10, 1), UnsupportedOperation);
    }
}

TEST_CASE("bootstrap intervals") {
    SECTION("zero residuals give a zero-width band at the point forecast") {
        const MatrixXd x = gaussian(50, 1, 1);
        const MatrixXd y = (2.0 * x).array() + 1.0;
        const MatrixXd xt = gaussian(20, 1, 2);
        const auto pi = bootstrap_interval(mlr_config(), tabular(x, y), xt, 0.1, 100, 5);
        const MatrixXd point = (2.0 * xt).array() + 1.0;
        CHECK((pi.upper - pi.lower).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((pi.lower - point).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(pi.method == IntervalMethod::bootstrap);
    }
    SECTION("fixed seed is bit-identical") {
        const MatrixXd x = gaussian(80, 2, 3);
        const MatrixXd y = x.col(0) * 1.5 - x.col(1) + gaussian(80, 1, 4, 0.5);
        const MatrixXd xt = gaussian(10, 2, 5);
        const auto a = bootstrap_interval(mlr_config(), tabular(x, y), xt, 0.05, 200, 17);
        const auto b = bootstrap_interval(mlr_config(), tabular(x, y), xt, 0.05, 200, 17);
        CHECK(a.lower == b.lower);
        CHECK(a.upper == b.upper);
        // Per-rep seeds are seed + r, so neighbouring seeds share almost every replicate.
        const auto c = bootstrap_interval(mlr_config(), tabular(x, y), xt, 0.05, 200, 9017);
        CHECK(a.lower != c.lower);
    }
    SECTION("calibrated on linear data") {
        const MatrixXd x = gaussian(200, 1, 21);
        const MatrixXd y = 2.0 * x + gaussian(200, 1, 22);
        const MatrixXd xt = gaussian(2000, 1, 23);
        const MatrixXd yt = 2.0 * xt + gaussian(2000, 1, 24);
        const auto pi = bootstrap_interval(mlr_config(), tabular(x, y), xt, 0.1, 500, 25);
        const double coverage = cs(pi.lower, pi.upper, yt);
        CHECK(coverage >= 0.85);
        CHECK(coverage <= 0.95);
    }
    SECTION("per-rep seeds and failure accounting") {
        const MatrixXd x = gaussian(40, 1, 31);
        const MatrixXd y = x + gaussian(40, 1, 32, 0.3);
        const auto train = tabular(x, y);
        const auto base = forecast::fit(train, mlr_config());
        const auto d = bootstrap_draws(base, train, gaussian(5, 1, 33), 30, 1000);
        CHECK(d.n_reps() == 30);
        CHECK(d.discarded == 0);
        for (std::size_t r = 0; r < 30; ++r) CHECK(d.seeds[r] == 1000 + r);

        // Infinite residuals make every replicate non-finite.
        const MatrixXd inf = MatrixXd::Constant(40, 1, std::numeric_limits<double>::infinity());
        const forecast::FittedModel broken(base.config(), base.n_features(), base.target_index(), base.params(),
                                           base.fitted_values(), inf);
        CHECK_THROWS_AS(bootstrap_draws(broken, train, gaussian(5, 1, 33), 30, 1), BootstrapError);
        CHECK_THROWS_AS(bootstrap_draws(base, train, gaussian(5, 1, 33), 1, 1), ArgumentError);
    }
}
