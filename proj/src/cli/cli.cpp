#include "sentinel/cli/cli.hpp"

#include "sentinel/core/csv.hpp"
#include "sentinel/error.hpp"
#include "sentinel/forecast/serialize.hpp"
#include "sentinel/harness/experiment.hpp"
#include "sentinel/harness/report.hpp"
#include "sentinel/log.hpp"
#include "sentinel/preprocess/impute.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace sentinel::cli {
namespace {

const std::vector<std::string> kSubcommands{"ingest", "preprocess", "train", "intervals",
                                            "detect", "inject",     "evaluate"};

std::string shortest(double v) { return core::format_double(v); }

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

int exit_for(const harness::EvalReport& report) { return report.any_failed() ? kExitPartial : kExitOk; }

int cmd_ingest(const harness::ExperimentConfig& c) {
    const auto series = harness::load_series(c);
    ensure_dir(c.output_dir);
    core::write_csv(c.output_dir / "ingested.csv", series);
    log::info("ingested " + std::to_string(series.n_steps()) + " steps x " + std::to_string(series.n_features()) +
              " features");
    return kExitOk;
}

int cmd_preprocess(const harness::ExperimentConfig& c) {
    const auto p = harness::prepare(c);
    ensure_dir(c.output_dir);
    core::write_csv(c.output_dir / "preprocessed.csv", p.raw);
    core::write_csv(c.output_dir / "model_input.csv", p.model);
    if (p.scaler) {
        nlohmann::json j;
        for (std::size_t f = 0; f < p.scaler->feature_names.size(); ++f)
            j[p.scaler->feature_names[f]] = {{"min", p.scaler->min[static_cast<Eigen::Index>(f)]},
                                             {"max", p.scaler->max[static_cast<Eigen::Index>(f)]}};
        std::ofstream out(c.output_dir / "scaler.json", std::ios::binary);
        if (!out) throw IoError("cannot write scaler.json");
        out << j.dump(2) << '\n';
    }
    if (c.preprocess.deseasonalize) {
        const Eigen::VectorXd train = p.raw.target().head(static_cast<Eigen::Index>(p.split));
        std::vector<core::Timestamp> ts(p.raw.timestamps().begin(), p.raw.timestamps().begin() + p.split);
        preprocess::write_decomposition_csv(c.output_dir / "decomposition.csv", ts,
                                            preprocess::decompose(train, c.preprocess.period));
    }
    log::info("preprocessed " + std::to_string(p.raw.n_steps()) + " steps; " + std::to_string(p.train.n_samples()) +
              " training windows");
    return kExitOk;
}

int cmd_train(const harness::ExperimentConfig& c) {
    const auto p = harness::prepare(c);
    ensure_dir(c.output_dir);
    bool failed = false;
    for (const auto& a : c.algorithms) {
        auto config = a.forecaster;
        config.seed = harness::algorithm_seed(c, a);
        try {
            const auto model = forecast::fit(p.train, config);
            forecast::save_model(c.output_dir / ("model_" + a.name + ".json"), model);
            log::info("trained '" + a.name + "'");
        } catch (const std::exception& e) {
            failed = true;
            log::warn("training '" + a.name + "' failed: " + e.what());
        }
    }
    return failed ? kExitPartial : kExitOk;
}

// intervals / detect: the full pipeline, emitting only the relevant files.
int cmd_partial(const harness::ExperimentConfig& c, bool intervals) {
    auto report = harness::run_experiment(c);
    ensure_dir(c.output_dir);
    for (const auto& a : report.algorithms) {
        if (!a.ok) continue;
        if (intervals) {
            for (const auto& t : a.traces)
                harness::write_interval_csv(
                    c.output_dir / ("intervals_" + a.name + "_" + harness::alpha_label(t.alpha) + ".csv"), t);
        } else {
            harness::write_detections_ndjson(c.output_dir / ("detections_" + a.name + ".ndjson"), a.detections,
                                             report.timestamps);
        }
    }
    if (!intervals && !report.golden.empty())
        anomaly::write_labels_csv(c.output_dir / "golden_labels.csv", report.golden);
    return exit_for(report);
}

int cmd_inject(const harness::ExperimentConfig& c) {
    if (c.injections.empty()) throw ConfigError("inject needs at least one [injections.<name>] table");
    auto series = harness::load_series(c);
    if (!series.categorical().empty()) series = series.with_categorical({});
    if (series.has_missing()) series = preprocess::impute_round_robin(series, c.preprocess.impute_options);
    const auto injected = harness::inject_span(c, series, 0);
    ensure_dir(c.output_dir);
    core::write_csv(c.output_dir / "injected.csv", injected.series);
    anomaly::write_labels_csv(c.output_dir / "labels.csv", injected.labels);
    log::info("injected " + std::to_string(injected.affected.size()) + " points in " +
              std::to_string(injected.labels.size()) + " windows");
    return kExitOk;
}

int cmd_evaluate(const harness::ExperimentConfig& c) {
    const auto report = harness::run_experiment(c);
    harness::emit_report(report, c.output_dir, c.plots);
    for (const auto& a : report.algorithms) {
        if (!a.ok) continue;
        std::ostringstream msg;
        msg << a.name << ": rmse " << shortest(a.rmse);
        for (const auto& m : a.alphas) msg << " | alpha " << shortest(m.alpha) << " mis " << shortest(m.mis)
                                           << " cs " << shortest(m.cs);
        if (a.detection) msg << " | f1 " << shortest(a.detection->f1) << " ed " << shortest(a.detection->ed_score);
        log::info(msg.str());
    }
    log::info("wrote " + c.output_dir.string());
    return exit_for(report);
}

}  // namespace

CommandInvocation parse_args(int argc, const char* const* argv) {
    CommandInvocation inv;
    CLI::App app{"Forecasting, prediction intervals and interval-based anomaly detection", "sentinel"};
    app.require_subcommand(1, 1);
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::optional<std::size_t> reps;
    std::string config;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config, "experiment TOML file")->required();
        sub->add_option("--set", sets, "override a config key, e.g. --set forecasters.esn.reservoir_size=50")
            ->take_all()
            ->allow_extra_args(false);
        sub->add_option("--seed", seed, "master seed (shorthand for --set seed=N)");
        sub->add_option("--alpha", alpha, "single significance level for intervals and the detector");
        sub->add_option("--reps", reps, "ensemble size (shorthand for --set intervals.reps=N)");
        // Unbound: a flag variable shared across subcommands is reset by the unselected ones.
        sub->add_flag("-v,--verbose", "more progress output on standard error");
        sub->add_flag("-q,--quiet", "suppress progress output");
    };
    const std::map<std::string, std::string> about{
        {"ingest", "load the configured source and write ingested.csv"},
        {"preprocess", "encode, impute, scale and write the model inputs"},
        {"train", "fit every configured forecaster and save model_<name>.json"},
        {"intervals", "write intervals_<name>_<alpha>.csv"},
        {"detect", "write detections_<name>.ndjson"},
        {"inject", "inject anomalies over the whole series; write injected.csv and labels.csv"},
        {"evaluate", "full pipeline; write report.json and all artifacts"}};
    for (const auto& name : kSubcommands) add_common(app.add_subcommand(name, about.at(name)));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        inv.help = true;
        return inv;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        inv.help = true;
        return inv;
    } catch (const CLI::ParseError& e) {
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        throw UsageError(std::string(e.what()) + "\n" + sub->help());
    }
    const auto* chosen = app.get_subcommands().front();
    inv.subcommand = chosen->get_name();
    inv.config = config;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
        inv.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (seed) inv.overrides.emplace_back("seed", std::to_string(*seed));
    if (alpha) {
        if (!(*alpha > 0.0 && *alpha < 1.0))
            throw UsageError("--alpha must lie in (0, 1), got " + shortest(*alpha));
        inv.overrides.emplace_back("intervals.alphas", "[" + shortest(*alpha) + "]");
        inv.overrides.emplace_back("detector.alpha", shortest(*alpha));
    }
    if (reps) {
        if (*reps < 2) throw UsageError("--reps must be at least 2");
        inv.overrides.emplace_back("intervals.reps", std::to_string(*reps));
    }
    inv.verbosity = chosen->count("--quiet") > 0 ? 0 : 1 + static_cast<int>(chosen->count("--verbose"));
    return inv;
}

int dispatch(const CommandInvocation& inv) {
    log::set_level(inv.verbosity <= 0 ? log::Level::quiet : inv.verbosity == 1 ? log::Level::info : log::Level::debug);
    const auto config = harness::load_config(inv.config, inv.overrides);
    log::debug("config " + inv.config.string() + ", output " + config.output_dir.string());
    if (inv.subcommand == "ingest") return cmd_ingest(config);
    if (inv.subcommand == "preprocess") return cmd_preprocess(config);
    if (inv.subcommand == "train") return cmd_train(config);
    if (inv.subcommand == "intervals") return cmd_partial(config, true);
    if (inv.subcommand == "detect") return cmd_partial(config, false);
    if (inv.subcommand == "inject") return cmd_inject(config);
    if (inv.subcommand == "evaluate") return cmd_evaluate(config);
    throw UsageError("unknown subcommand '" + inv.subcommand + "'");
}

int run(int argc, const char* const* argv) {
    try {
        const auto inv = parse_args(argc, argv);
        if (inv.help) return kExitOk;
        return dispatch(inv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << e.kind() << " error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace sentinel::cli
