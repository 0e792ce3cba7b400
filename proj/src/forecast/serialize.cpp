#include "sentinel/forecast/serialize.hpp"

#include "sentinel/error.hpp"

#include <fstream>

namespace sentinel::forecast {

using nlohmann::json;
using Eigen::Index;

json matrix_to_json(const Eigen::MatrixXd& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Index>(data.size()) != rows * cols) throw ParseError("matrix data length mismatch");
    return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j) {
    const auto data = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Index>(data.size()));
}

json sparse_to_json(const Eigen::SparseMatrix<double>& m) {
    json entries = json::array();
    for (Index k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            entries.push_back({it.row(), it.col(), it.value()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Eigen::SparseMatrix<double> sparse_from_json(const json& j) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (const auto& e : j.at("entries"))
        triplets.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>());
    Eigen::SparseMatrix<double> m(j.at("rows").get<Index>(), j.at("cols").get<Index>());
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json config_to_json(const ForecasterConfig& c) {
    return {
        {"kind", to_string(c.kind)},
        {"horizon", c.horizon},
        {"window", c.window},
        {"seed", c.seed},
        {"esn",
         {{"reservoir_size", c.esn.reservoir_size},
          {"spectral_radius", c.esn.spectral_radius},
          {"density", c.esn.density},
          {"ridge_lambda", c.esn.ridge_lambda},
          {"washout_steps", c.esn.washout_steps},
          {"input_scaling", c.esn.input_scaling}}},
        {"ccn",
         {{"max_hidden_units", c.ccn.max_hidden_units},
          {"candidate_pool", c.ccn.candidate_pool},
          {"patience", c.ccn.patience},
          {"tol", c.ccn.tol},
          {"max_candidate_steps", c.ccn.max_candidate_steps},
          {"candidate_learning_rate", c.ccn.candidate_learning_rate}}},
        {"rnn",
         {{"hidden_units", c.rnn.hidden_units},
          {"epochs", c.rnn.epochs},
          {"batch_size", c.rnn.batch_size},
          {"learning_rate", c.rnn.learning_rate},
          {"dropout_rate", c.rnn.dropout_rate}}},
        {"arx", {{"lag_order", c.arx.lag_order}}},
    };
}

ForecasterConfig config_from_json(const json& j) {
    ForecasterConfig c;
    try {
        c.kind = kind_from_string(j.at("kind").get<std::string>());
        read_opt(j, "horizon", c.horizon);
        read_opt(j, "window", c.window);
        read_opt(j, "seed", c.seed);
        if (j.contains("esn")) {
            const auto& e = j.at("esn");
            read_opt(e, "reservoir_size", c.esn.reservoir_size);
            read_opt(e, "spectral_radius", c.esn.spectral_radius);
            read_opt(e, "density", c.esn.density);
            read_opt(e, "ridge_lambda", c.esn.ridge_lambda);
            read_opt(e, "washout_steps", c.esn.washout_steps);
            read_opt(e, "input_scaling", c.esn.input_scaling);
        }
        if (j.contains("ccn")) {
            const auto& e = j.at("ccn");
            read_opt(e, "max_hidden_units", c.ccn.max_hidden_units);
            read_opt(e, "candidate_pool", c.ccn.candidate_pool);
            read_opt(e, "patience", c.ccn.patience);
            read_opt(e, "tol", c.ccn.tol);
            read_opt(e, "max_candidate_steps", c.ccn.max_candidate_steps);
            read_opt(e, "candidate_learning_rate", c.ccn.candidate_learning_rate);
        }
        if (j.contains("rnn")) {
            const auto& e = j.at("rnn");
            read_opt(e, "hidden_units", c.rnn.hidden_units);
            read_opt(e, "epochs", c.rnn.epochs);
            read_opt(e, "batch_size", c.rnn.batch_size);
            read_opt(e, "learning_rate", c.rnn.learning_rate);
            read_opt(e, "dropout_rate", c.rnn.dropout_rate);
        }
        if (j.contains("arx")) read_opt(j.at("arx"), "lag_order", c.arx.lag_order);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad forecaster config: ") + e.what());
    }
    return c;
}

json model_to_json(const FittedModel& model) {
    json params = std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PersistenceParams>) {
                return json::object();
            } else if constexpr (std::is_same_v<T, LinearParams>) {
                return {{"columns", p.columns}, {"coefficients", matrix_to_json(p.coefficients)}};
            } else if constexpr (std::is_same_v<T, EsnParams>) {
                return {{"reservoir", sparse_to_json(p.reservoir.weights)},
                        {"input_weights", matrix_to_json(p.reservoir.input_weights)},
                        {"readout", matrix_to_json(p.readout)}};
            } else if constexpr (std::is_same_v<T, CcnParams>) {
                json hidden = json::array();
                for (const auto& w : p.network.hidden) hidden.push_back(vector_to_json(w));
                return {{"hidden", hidden},
                        {"output", matrix_to_json(p.network.output)},
                        {"stage_mse", p.network.stage_mse}};
            } else {
                return {{"n_features", p.network.n_features()},
                        {"hidden", p.network.hidden()},
                        {"horizon", p.network.horizon()},
                        {"parameters", vector_to_json(p.network.parameters())}};
            }
        },
        model.params());
    return {{"format", kModelFormatName},
            {"version", kModelFormatVersion},
            {"kind", to_string(model.kind())},
            {"config", config_to_json(model.config())},
            {"n_features", model.n_features()},
            {"target_index", model.target_index()},
            {"params", params},
            {"fitted", matrix_to_json(model.fitted_values())},
            {"residuals", matrix_to_json(model.residuals())}};
}

FittedModel model_from_json(const json& j) {
    if (!j.is_object() || j.value("format", std::string{}) != kModelFormatName)
        throw VersionError("not an interval-sentinel model document");
    const int version = j.value("version", -1);
    if (version != kModelFormatVersion)
        throw VersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kModelFormatVersion) + ")");
    try {
        const ForecasterConfig config = config_from_json(j.at("config"));
        const auto& p = j.at("params");
        ModelParams params;
        switch (config.kind) {
            case ForecasterKind::persistence: params = PersistenceParams{}; break;
            case ForecasterKind::mlr:
            case ForecasterKind::arx:
                params = LinearParams{p.at("columns").get<std::vector<Index>>(), matrix_from_json(p.at("coefficients"))};
                break;
            case ForecasterKind::esn: {
                EsnParams e;
                e.reservoir.weights = sparse_from_json(p.at("reservoir"));
                e.reservoir.input_weights = matrix_from_json(p.at("input_weights"));
                e.readout = matrix_from_json(p.at("readout"));
                params = std::move(e);
                break;
            }
            case ForecasterKind::ccn: {
                CcnParams c;
                for (const auto& w : p.at("hidden")) c.network.hidden.push_back(vector_from_json(w));
                c.network.output = matrix_from_json(p.at("output"));
                c.network.stage_mse = p.at("stage_mse").get<std::vector<double>>();
                params = std::move(c);
                break;
            }
            case ForecasterKind::rnn: {
                LstmNetwork net(p.at("n_features").get<std::size_t>(), p.at("hidden").get<std::size_t>(),
                                p.at("horizon").get<std::size_t>());
                const Eigen::VectorXd values = vector_from_json(p.at("parameters"));
                if (values.size() != net.parameters().size()) throw ParseError("rnn parameter count mismatch");
                net.parameters() = values;
                params = RnnParams{std::move(net)};
                break;
            }
        }
        return FittedModel(config, j.at("n_features").get<std::size_t>(), j.at("target_index").get<std::size_t>(),
                           std::move(params), matrix_from_json(j.at("fitted")), matrix_from_json(j.at("residuals")));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const FittedModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << model_to_json(model).dump() << '\n';
}

FittedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

}  // namespace sentinel::forecast
