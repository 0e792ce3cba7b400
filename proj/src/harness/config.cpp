#include "sentinel/harness/config.hpp"

#include "sentinel/error.hpp"
#include "sentinel/random.hpp"

#include <toml.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace sentinel::harness {
namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

/// Typed view of one TOML table that remembers which keys were read, so
/// leftovers can be reported as unknown.
class Section {
public:
    Section(const toml::table& table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

    bool has(const std::string& key) const { return table_.contains(key); }

    const toml::node* node(const std::string& key) {
        used_.insert(key);
        return table_.get(key);
    }

    double real(const std::string& key, double fallback) {
        const auto* n = node(key);
        if (!n) return fallback;
        if (auto v = n->value<double>()) return *v;  // also accepts integers
        throw ConfigError("'" + join(prefix_, key) + "' must be a number");
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        const auto* n = node(key);
        if (!n) return fallback;
        if (n->is_integer()) return n->as_integer()->get();
        throw ConfigError("'" + join(prefix_, key) + "' must be an integer");
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        const auto v = integer(key, static_cast<std::int64_t>(fallback));
        if (v < 0) throw ConfigError("'" + join(prefix_, key) + "' must be non-negative");
        return static_cast<std::size_t>(v);
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        return static_cast<std::uint64_t>(integer(key, static_cast<std::int64_t>(fallback)));
    }

    bool flag(const std::string& key, bool fallback) {
        const auto* n = node(key);
        if (!n) return fallback;
        if (n->is_boolean()) return n->as_boolean()->get();
        throw ConfigError("'" + join(prefix_, key) + "' must be true or false");
    }

    std::optional<std::string> text(const std::string& key) {
        const auto* n = node(key);
        if (!n) return std::nullopt;
        if (n->is_string()) return n->as_string()->get();
        throw ConfigError("'" + join(prefix_, key) + "' must be a string");
    }

    std::string text(const std::string& key, const std::string& fallback) { return text(key).value_or(fallback); }

    std::vector<std::string> strings(const std::string& key) {
        std::vector<std::string> out;
        const auto* n = node(key);
        if (!n) return out;
        const auto* arr = n->as_array();
        if (!arr) throw ConfigError("'" + join(prefix_, key) + "' must be an array of strings");
        for (const auto& item : *arr) {
            if (!item.is_string()) throw ConfigError("'" + join(prefix_, key) + "' must be an array of strings");
            out.push_back(item.as_string()->get());
        }
        return out;
    }

    std::optional<std::vector<double>> reals(const std::string& key) {
        const auto* n = node(key);
        if (!n) return std::nullopt;
        std::vector<double> out;
        if (auto v = n->value<double>()) return std::vector<double>{*v};
        const auto* arr = n->as_array();
        if (!arr) throw ConfigError("'" + join(prefix_, key) + "' must be an array of numbers");
        for (const auto& item : *arr) {
            auto v = item.value<double>();
            if (!v) throw ConfigError("'" + join(prefix_, key) + "' must be an array of numbers");
            out.push_back(*v);
        }
        return out;
    }

    std::optional<Section> table(const std::string& key) {
        const auto* n = node(key);
        if (!n) return std::nullopt;
        const auto* t = n->as_table();
        if (!t) throw ConfigError("'" + join(prefix_, key) + "' must be a table");
        return Section(*t, join(prefix_, key));
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : table_) out.emplace_back(k.str());
        return out;
    }

    void finish() const {
        for (const auto& [k, v] : table_)
            if (!used_.count(std::string(k.str())))
                throw ConfigError("unknown config key '" + join(prefix_, std::string(k.str())) + "'");
    }

private:
    const toml::table& table_;
    std::string prefix_;
    std::set<std::string> used_;
};

toml::table parse_toml(const std::string& text, const std::string& origin) {
    try {
        return toml::parse(text, origin);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << origin << ":" << e.source().begin.line << ": " << e.description();
        throw ConfigError(msg.str());
    }
}

// Top-level sections an override may create when the file omits them.
const std::set<std::string> kSections{"data", "preprocess", "split", "intervals", "detector", "labels"};

void apply_override(toml::table& root, const std::string& key, const std::string& value) {
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string part; std::getline(ss, part, '.');) {
        if (part.empty()) throw ConfigError("malformed override key '" + key + "'");
        parts.push_back(part);
    }
    if (parts.empty()) throw ConfigError("malformed override key '" + key + "'");
    toml::table* table = &root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        auto* next = table->get(parts[i]);
        if (!next && i == 0 && kSections.count(parts[i])) next = &table->insert(parts[i], toml::table{}).first->second;
        if (!next || !next->is_table())
            throw ConfigError("override '" + key + "' does not reference an existing config section");
        table = next->as_table();
    }
    toml::table parsed;
    try {
        parsed = toml::parse("v = " + value);
    } catch (const toml::parse_error&) {
        parsed.insert_or_assign("v", value);  // bare word: treat as a string
    }
    const auto* existing = table->get(parts.back());
    const auto* fresh = parsed.get("v");
    if (existing && existing->is_floating_point() && fresh->is_integer()) {
        table->insert_or_assign(parts.back(), static_cast<double>(fresh->as_integer()->get()));
    } else if (existing && existing->is_string() && !fresh->is_string()) {
        table->insert_or_assign(parts.back(), value);
    } else {
        table->insert_or_assign(parts.back(), *fresh);
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

core::Aggregation aggregation_from_string(const std::string& s) {
    if (s == "sum") return core::Aggregation::sum;
    if (s == "mean") return core::Aggregation::mean;
    throw ConfigError("data.resample_aggregation must be 'sum' or 'mean', got '" + s + "'");
}

anomaly::Baseline baseline_from_string(const std::string& s) {
    if (s == "last_breach") return anomaly::Baseline::last_breach;
    if (s == "last_anomalous") return anomaly::Baseline::last_anomalous;
    throw ConfigError("detector.baseline must be 'last_breach' or 'last_anomalous', got '" + s + "'");
}

DataConfig read_data(Section& s, const std::filesystem::path& base) {
    DataConfig data;
    if (auto p = s.text("path")) data.path = resolve(base, *p);
    data.schema.timestamp_column = s.text("timestamp_column", "timestamp");
    data.schema.target = s.text("target", "");
    if (s.has("step_seconds")) data.schema.step_seconds = s.integer("step_seconds", 0);
    const auto na = s.text("na_policy", "drop");
    if (na == "drop") data.schema.na_policy = core::NaPolicy::drop_row;
    else if (na == "missing") data.schema.na_policy = core::NaPolicy::as_missing;
    else throw ConfigError("data.na_policy must be 'drop' or 'missing', got '" + na + "'");
    for (const auto& n : s.strings("numeric")) data.schema.features.push_back({n, core::FeatureType::numeric});
    for (const auto& n : s.strings("categorical"))
        data.schema.features.push_back({n, core::FeatureType::categorical});
    for (const auto& n : s.strings("ignore")) data.schema.features.push_back({n, core::FeatureType::ignore});
    data.derive_submetering4 = s.flag("derive_submetering4", false);
    data.resample_seconds = s.integer("resample_seconds", 0);
    data.resample_aggregation = aggregation_from_string(s.text("resample_aggregation", "sum"));
    if (auto syn = s.table("synthetic")) {
        SyntheticSpec spec;
        spec.n = syn->count("n", spec.n);
        spec.period = syn->count("period", spec.period);
        spec.phi = syn->real("phi", spec.phi);
        spec.amplitude = syn->real("amplitude", spec.amplitude);
        spec.noise_sd = syn->real("noise_sd", spec.noise_sd);
        spec.exogenous = syn->count("exogenous", spec.exogenous);
        spec.step_seconds = syn->integer("step_seconds", spec.step_seconds);
        spec.start = syn->integer("start", spec.start);
        spec.seed = syn->seed("seed", 0);  // 0 = derive from the master seed
        syn->finish();
        data.synthetic = spec;
    }
    s.finish();
    return data;
}

AlgorithmConfig read_algorithm(Section& s, const std::string& name, std::size_t window, std::size_t horizon) {
    AlgorithmConfig a;
    a.name = name;
    auto& f = a.forecaster;
    f.kind = forecast::kind_from_string(s.text("kind", name));
    f.window = window;
    f.horizon = horizon;
    a.explicit_seed = s.has("seed");
    f.seed = s.seed("seed", 0);
    const bool rnn = f.kind == forecast::ForecasterKind::rnn;
    a.interval = intervals::method_from_string(s.text("interval", rnn ? "dropout" : "bootstrap"));
    f.esn.reservoir_size = s.count("reservoir_size", f.esn.reservoir_size);
    f.esn.spectral_radius = s.real("spectral_radius", f.esn.spectral_radius);
    f.esn.density = s.real("density", f.esn.density);
    f.esn.ridge_lambda = s.real("ridge_lambda", f.esn.ridge_lambda);
    f.esn.washout_steps = s.count("washout_steps", f.esn.washout_steps);
    f.esn.input_scaling = s.real("input_scaling", f.esn.input_scaling);
    f.ccn.max_hidden_units = s.count("max_hidden_units", f.ccn.max_hidden_units);
    f.ccn.candidate_pool = s.count("candidate_pool", f.ccn.candidate_pool);
    f.ccn.patience = s.count("patience", f.ccn.patience);
    f.ccn.tol = s.real("tol", f.ccn.tol);
    f.ccn.max_candidate_steps = s.count("max_candidate_steps", f.ccn.max_candidate_steps);
    f.ccn.candidate_learning_rate = s.real("candidate_learning_rate", f.ccn.candidate_learning_rate);
    f.rnn.hidden_units = s.count("hidden_units", f.rnn.hidden_units);
    f.rnn.epochs = s.count("epochs", f.rnn.epochs);
    f.rnn.batch_size = s.count("batch_size", f.rnn.batch_size);
    f.rnn.learning_rate = s.real("learning_rate", f.rnn.learning_rate);
    f.rnn.dropout_rate = s.real("dropout_rate", f.rnn.dropout_rate);
    f.arx.lag_order = s.count("lag_order", f.arx.lag_order);
    s.finish();
    return a;
}

InjectionConfig read_injection(Section& s, const std::string& name) {
    InjectionConfig inj;
    inj.name = name;
    auto& spec = inj.spec;
    spec.kind = anomaly::anomaly_kind_from_string(s.text("kind", name));
    spec.contamination = s.real("contamination", spec.contamination);
    spec.magnitude_sigmas = s.real("magnitude_sigmas", spec.magnitude_sigmas);
    spec.run_length = s.count("run_length", spec.run_length);
    spec.season_length = s.count("season_length", spec.season_length);
    spec.min_gap = s.count("min_gap", spec.min_gap);
    inj.explicit_seed = s.has("seed");
    spec.seed = s.seed("seed", 0);
    s.finish();
    return inj;
}

ExperimentConfig read_config(const toml::table& root, const std::filesystem::path& base) {
    ExperimentConfig c;
    Section s(root, "");
    c.seed = s.seed("seed", 0);
    c.window = s.count("window", c.window);
    c.horizon = s.count("horizon", c.horizon);
    c.output_dir = resolve(base, s.text("output_dir", "out"));
    c.plots = s.flag("plots", false);
    if (auto d = s.table("data")) c.data = read_data(*d, base);
    if (auto p = s.table("preprocess")) {
        c.preprocess.impute = p->flag("impute", true);
        c.preprocess.impute_options.past_only = p->flag("past_only", true);
        c.preprocess.impute_options.max_iters = p->count("max_iters", 10);
        c.preprocess.impute_options.tolerance = p->real("tolerance", 1e-6);
        c.preprocess.scale = p->flag("scale", true);
        c.preprocess.deseasonalize = p->flag("deseasonalize", false);
        c.preprocess.period = p->count("period", c.preprocess.period);
        p->finish();
    }
    if (auto p = s.table("split")) {
        const auto mode = p->text("mode", "holdout");
        if (mode == "holdout") c.split.mode = core::SplitMode::holdout;
        else if (mode == "walk_forward") c.split.mode = core::SplitMode::walk_forward;
        else throw ConfigError("split.mode must be 'holdout' or 'walk_forward', got '" + mode + "'");
        if (p->has("fraction") && p->has("boundary"))
            throw ConfigError("split.fraction and split.boundary are mutually exclusive");
        if (auto b = p->text("boundary")) {
            try {
                c.split.boundary = core::parse_iso8601(*b);
            } catch (const Error& e) {
                throw ConfigError(std::string("split.boundary: ") + e.what());
            }
        } else {
            c.split.boundary = p->real("fraction", 0.8);
        }
        c.split.refit = p->flag("refit", false);
        p->finish();
    }
    if (auto p = s.table("intervals")) {
        if (auto a = p->reals("alphas")) c.alphas = *a;
        c.reps = p->count("reps", c.reps);
        p->finish();
    }
    if (auto p = s.table("detector")) {
        auto& d = c.detector;
        d.alpha = p->real("alpha", d.alpha);
        d.is_ratio = p->real("is_ratio", d.is_ratio);
        d.sigma_multiplier = p->real("sigma_multiplier", d.sigma_multiplier);
        d.warmup = p->count("warmup", d.warmup);
        d.baseline = baseline_from_string(p->text("baseline", "last_breach"));
        d.rolling_window = p->count("rolling_window", d.rolling_window);
        c.prime_detector = p->flag("prime_with_train", true);
        p->finish();
    }
    if (auto p = s.table("labels")) {
        if (auto path = p->text("path")) c.labels_path = resolve(base, *path);
        p->finish();
    }
    if (auto p = s.table("forecasters")) {
        for (const auto& name : p->keys()) {
            auto t = p->table(name);
            c.algorithms.push_back(read_algorithm(*t, name, c.window, c.horizon));
        }
        p->finish();
    }
    if (auto p = s.table("injections")) {
        for (const auto& name : p->keys()) {
            auto t = p->table(name);
            c.injections.push_back(read_injection(*t, name));
        }
        p->finish();
    }
    s.finish();
    c.validate();
    return c;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (algorithms.empty()) throw ConfigError("at least one forecaster must be configured");
    if (alphas.empty()) throw ConfigError("at least one interval alpha must be configured");
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("interval alphas must lie in (0, 1), got " + std::to_string(a));
    std::set<double> unique(alphas.begin(), alphas.end());
    if (unique.size() != alphas.size()) throw ConfigError("interval alphas must be distinct");
    if (!(detector.alpha > 0.0 && detector.alpha < 1.0)) throw ConfigError("detector.alpha must lie in (0, 1)");
    if (!(detector.is_ratio > 0.0)) throw ConfigError("detector.is_ratio must be positive");
    if (!(detector.sigma_multiplier > 0.0)) throw ConfigError("detector.sigma_multiplier must be positive");
    if (reps == 0) throw ConfigError("intervals.reps must be positive");
    if (!data.path && !data.synthetic) throw ConfigError("data.path or a [data.synthetic] table is required");
    if (data.path && data.synthetic) throw ConfigError("data.path and [data.synthetic] are mutually exclusive");
    if (data.path && data.schema.target.empty()) throw ConfigError("data.target is required for CSV input");
    if (data.resample_seconds < 0) throw ConfigError("data.resample_seconds must be non-negative");
    if (split.refit) throw ConfigError("split.refit is not supported: evaluation is static");
    if (!injections.empty() && labels_path) throw ConfigError("injections and labels.path are mutually exclusive");
    if (preprocess.deseasonalize && preprocess.period < 2) throw ConfigError("preprocess.period must be at least 2");
    for (const auto& a : algorithms) {
        a.forecaster.validate();
        if (a.interval == intervals::IntervalMethod::dropout && a.forecaster.kind != forecast::ForecasterKind::rnn)
            throw ConfigError("forecaster '" + a.name + "': dropout intervals require kind = \"rnn\"");
    }
    for (const auto& inj : injections) {
        try {
            inj.spec.validate();
        } catch (const Error& e) {
            throw ConfigError("injection '" + inj.name + "': " + e.what());
        }
    }
}

ExperimentConfig parse_config(const std::string& toml_text, const std::vector<Override>& overrides,
                              const std::filesystem::path& base_dir) {
    auto root = parse_toml(toml_text, "config");
    for (const auto& [k, v] : overrides) apply_override(root, k, v);
    try {
        return read_config(root, base_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    auto root = parse_toml(text.str(), path.string());
    for (const auto& [k, v] : overrides) apply_override(root, k, v);
    try {
        return read_config(root, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    using nlohmann::json;
    json j;
    j["seed"] = c.seed;
    j["window"] = c.window;
    j["horizon"] = c.horizon;
    json data;
    if (c.data.path) {
        data["path"] = c.data.path->filename().string();
        data["timestamp_column"] = c.data.schema.timestamp_column;
        data["target"] = c.data.schema.target;
        json features = json::array();
        for (const auto& f : c.data.schema.features) {
            const char* type = f.type == core::FeatureType::numeric       ? "numeric"
                               : f.type == core::FeatureType::categorical ? "categorical"
                                                                          : "ignore";
            features.push_back({{"name", f.name}, {"type", type}});
        }
        data["features"] = features;
        data["na_policy"] = c.data.schema.na_policy == core::NaPolicy::drop_row ? "drop" : "missing";
    }
    if (c.data.synthetic) {
        const auto& s = *c.data.synthetic;
        data["synthetic"] = {{"n", s.n},           {"period", s.period},       {"phi", s.phi},
                             {"amplitude", s.amplitude}, {"noise_sd", s.noise_sd}, {"exogenous", s.exogenous},
                             {"step_seconds", s.step_seconds}, {"seed", synthetic_seed(c)}};
    }
    data["derive_submetering4"] = c.data.derive_submetering4;
    data["resample_seconds"] = c.data.resample_seconds;
    data["resample_aggregation"] = c.data.resample_aggregation == core::Aggregation::sum ? "sum" : "mean";
    j["data"] = data;
    j["preprocess"] = {{"impute", c.preprocess.impute},
                       {"past_only", c.preprocess.impute_options.past_only},
                       {"max_iters", c.preprocess.impute_options.max_iters},
                       {"tolerance", c.preprocess.impute_options.tolerance},
                       {"scale", c.preprocess.scale},
                       {"deseasonalize", c.preprocess.deseasonalize},
                       {"period", c.preprocess.period}};
    json split{{"mode", c.split.mode == core::SplitMode::holdout ? "holdout" : "walk_forward"}};
    if (const auto* f = std::get_if<double>(&c.split.boundary)) split["fraction"] = *f;
    else split["boundary"] = core::format_iso8601(std::get<core::Timestamp>(c.split.boundary));
    j["split"] = split;
    j["intervals"] = {{"alphas", c.alphas}, {"reps", c.reps}};
    j["detector"] = {{"alpha", c.detector.alpha},
                     {"is_ratio", c.detector.is_ratio},
                     {"sigma_multiplier", c.detector.sigma_multiplier},
                     {"warmup", c.detector.warmup},
                     {"baseline", c.detector.baseline == anomaly::Baseline::last_breach ? "last_breach"
                                                                                         : "last_anomalous"},
                     {"rolling_window", c.detector.rolling_window},
                     {"prime_with_train", c.prime_detector}};
    json algos = json::array();
    for (const auto& a : c.algorithms) {
        const auto& f = a.forecaster;
        json entry{{"name", a.name},
                   {"kind", forecast::to_string(f.kind)},
                   {"interval", intervals::to_string(a.interval)},
                   {"seed", algorithm_seed(c, a)}};
        switch (f.kind) {
            case forecast::ForecasterKind::esn:
                entry["reservoir_size"] = f.esn.reservoir_size;
                entry["spectral_radius"] = f.esn.spectral_radius;
                entry["density"] = f.esn.density;
                entry["ridge_lambda"] = f.esn.ridge_lambda;
                entry["washout_steps"] = f.esn.washout_steps;
                entry["input_scaling"] = f.esn.input_scaling;
                break;
            case forecast::ForecasterKind::ccn:
                entry["max_hidden_units"] = f.ccn.max_hidden_units;
                entry["candidate_pool"] = f.ccn.candidate_pool;
                entry["patience"] = f.ccn.patience;
                entry["tol"] = f.ccn.tol;
                entry["max_candidate_steps"] = f.ccn.max_candidate_steps;
                entry["candidate_learning_rate"] = f.ccn.candidate_learning_rate;
                break;
            case forecast::ForecasterKind::rnn:
                entry["hidden_units"] = f.rnn.hidden_units;
                entry["epochs"] = f.rnn.epochs;
                entry["batch_size"] = f.rnn.batch_size;
                entry["learning_rate"] = f.rnn.learning_rate;
                entry["dropout_rate"] = f.rnn.dropout_rate;
                break;
            case forecast::ForecasterKind::arx: entry["lag_order"] = f.arx.lag_order; break;
            default: break;
        }
        algos.push_back(entry);
    }
    j["forecasters"] = algos;
    json inj = json::array();
    for (const auto& i : c.injections)
        inj.push_back({{"name", i.name},
                       {"kind", anomaly::to_string(i.spec.kind)},
                       {"contamination", i.spec.contamination},
                       {"magnitude_sigmas", i.spec.magnitude_sigmas},
                       {"run_length", i.spec.run_length},
                       {"season_length", i.spec.season_length},
                       {"min_gap", i.spec.min_gap},
                       {"seed", injection_seed(c, i)}});
    j["injections"] = inj;
    if (c.labels_path) j["labels"] = c.labels_path->filename().string();
    return j;
}

std::uint64_t algorithm_seed(const ExperimentConfig& c, const AlgorithmConfig& a) {
    return a.explicit_seed ? a.forecaster.seed : stage_seed(c.seed, "fit:" + a.name);
}

std::uint64_t interval_seed(const ExperimentConfig& c, const AlgorithmConfig& a) {
    return stage_seed(c.seed, "intervals:" + a.name);
}

std::uint64_t injection_seed(const ExperimentConfig& c, const InjectionConfig& i) {
    return i.explicit_seed ? i.spec.seed : stage_seed(c.seed, "inject:" + i.name);
}

std::uint64_t synthetic_seed(const ExperimentConfig& c) {
    return c.data.synthetic && c.data.synthetic->seed != 0 ? c.data.synthetic->seed : stage_seed(c.seed, "data");
}

}  // namespace sentinel::harness
