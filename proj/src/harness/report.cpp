#include "sentinel/harness/report.hpp"

#include "sentinel/core/csv.hpp"
#include "sentinel/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sentinel::harness {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

bool EvalReport::any_failed() const {
    return std::any_of(algorithms.begin(), algorithms.end(), [](const auto& a) { return !a.ok; });
}

std::string alpha_label(double alpha) { return core::format_double(alpha); }

json report_to_json(const EvalReport& r) {
    json algos = json::array();
    for (const auto& a : r.algorithms) {
        json entry{{"name", a.name},
                   {"kind", a.kind},
                   {"interval_method", a.interval_method},
                   {"status", a.ok ? "ok" : "failed"}};
        if (!a.ok) {
            entry["error"] = a.error;
            algos.push_back(entry);
            continue;
        }
        entry["rmse"] = finite_or_null(a.rmse);
        entry["bootstrap_discarded"] = a.bootstrap_discarded;
        json alphas = json::array();
        for (const auto& m : a.alphas)
            alphas.push_back({{"alpha", m.alpha},
                              {"mis", finite_or_null(m.mis)},
                              {"smis", m.smis ? finite_or_null(*m.smis) : json(nullptr)},
                              {"cs", finite_or_null(m.cs)}});
        entry["intervals"] = alphas;
        if (a.detection) {
            const auto& d = *a.detection;
            entry["detection"] = {{"precision", d.precision}, {"recall", d.recall},
                                  {"f1", d.f1},               {"ed_score", d.ed_score},
                                  {"n_anomalous", d.n_anomalous}, {"n_breach", d.n_breach}};
        } else {
            entry["detection"] = nullptr;
        }
        algos.push_back(entry);
    }
    return json{{"mode", r.mode},
                {"seed", r.seed},
                {"n_steps", r.n_steps},
                {"n_train", r.n_train},
                {"n_test_windows", r.n_test_windows},
                {"algorithms", algos},
                {"config", r.config}};
}

EvalReport report_from_json(const json& j) {
    try {
        EvalReport r;
        r.mode = j.at("mode").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.n_steps = j.at("n_steps").get<std::size_t>();
        r.n_train = j.at("n_train").get<std::size_t>();
        r.n_test_windows = j.at("n_test_windows").get<std::size_t>();
        r.config = j.at("config");
        for (const auto& e : j.at("algorithms")) {
            AlgorithmReport a;
            a.name = e.at("name").get<std::string>();
            a.kind = e.at("kind").get<std::string>();
            a.interval_method = e.at("interval_method").get<std::string>();
            a.ok = e.at("status").get<std::string>() == "ok";
            if (!a.ok) {
                a.error = e.at("error").get<std::string>();
                r.algorithms.push_back(a);
                continue;
            }
            a.rmse = number_or_nan(e.at("rmse"));
            a.bootstrap_discarded = e.at("bootstrap_discarded").get<std::size_t>();
            for (const auto& m : e.at("intervals")) {
                AlphaMetrics am;
                am.alpha = m.at("alpha").get<double>();
                am.mis = number_or_nan(m.at("mis"));
                if (!m.at("smis").is_null()) am.smis = m.at("smis").get<double>();
                am.cs = number_or_nan(m.at("cs"));
                a.alphas.push_back(am);
            }
            if (const auto& d = e.at("detection"); !d.is_null()) {
                DetectionMetrics dm;
                dm.precision = d.at("precision").get<double>();
                dm.recall = d.at("recall").get<double>();
                dm.f1 = d.at("f1").get<double>();
                dm.ed_score = d.at("ed_score").get<double>();
                dm.n_anomalous = d.at("n_anomalous").get<std::size_t>();
                dm.n_breach = d.at("n_breach").get<std::size_t>();
                a.detection = dm;
            }
            r.algorithms.push_back(a);
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

void write_interval_csv(const std::filesystem::path& path, const IntervalTrace& t) {
    auto out = open_for_write(path);
    out << "timestamp,lower,upper,actual,interval_score\n";
    for (std::size_t i = 0; i < t.timestamps.size(); ++i)
        out << core::format_iso8601(t.timestamps[i]) << ',' << core::format_double(t.lower[i]) << ','
            << core::format_double(t.upper[i]) << ',' << core::format_double(t.actual[i]) << ','
            << core::format_double(t.interval_score[i]) << '\n';
    close_checked(out, path);
}

void write_detections_ndjson(const std::filesystem::path& path, const std::vector<anomaly::DetectionRecord>& records,
                             const std::vector<core::Timestamp>& timestamps) {
    auto out = open_for_write(path);
    for (const auto& d : records) {
        json line{{"index", d.index},
                  {"verdict", anomaly::to_string(d.verdict)},
                  {"is", d.is_value ? finite_or_null(*d.is_value) : json(nullptr)},
                  {"deviation_sigmas", finite_or_null(d.deviation_sigmas)}};
        if (d.index < timestamps.size()) line["timestamp"] = core::format_iso8601(timestamps[d.index]);
        out << line.dump() << '\n';
    }
    close_checked(out, path);
}

EvalReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return report_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void emit_report(const EvalReport& report, const std::filesystem::path& dir, bool plots) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    {
        const auto path = dir / "report.json";
        auto out = open_for_write(path);
        out << report_to_json(report).dump(2) << '\n';
        close_checked(out, path);
    }
    {
        const auto path = dir / "timings.json";
        auto out = open_for_write(path);
        out << json(report.runtime_seconds).dump(2) << '\n';
        close_checked(out, path);
    }
    for (const auto& a : report.algorithms) {
        if (!a.ok) continue;
        for (const auto& t : a.traces)
            write_interval_csv(dir / ("intervals_" + a.name + "_" + alpha_label(t.alpha) + ".csv"), t);
        write_detections_ndjson(dir / ("detections_" + a.name + ".ndjson"), a.detections, report.timestamps);
    }
    if (!report.golden.empty()) anomaly::write_labels_csv(dir / "golden_labels.csv", report.golden);
    if (plots) {
        const auto path = dir / "plots.svg";
        auto out = open_for_write(path);
        out << render_svg(report);
        close_checked(out, path);
    }
}

std::string render_svg(const EvalReport& report) {
    constexpr double width = 1200.0;
    constexpr double panel = 260.0;
    constexpr double margin = 40.0;
    std::vector<const AlgorithmReport*> shown;
    for (const auto& a : report.algorithms)
        if (a.ok && !a.traces.empty()) shown.push_back(&a);

    std::ostringstream svg;
    svg.precision(6);
    const double height = margin + static_cast<double>(std::max<std::size_t>(1, shown.size())) * (panel + margin);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (shown.empty()) svg << "<text x=\"20\" y=\"30\">no successful algorithms</text>\n";

    for (std::size_t p = 0; p < shown.size(); ++p) {
        const auto& a = *shown[p];
        const auto& t = a.traces.front();  // first configured alpha
        // One point per timestamp: traces list every (window, lead) cell.
        std::map<core::Timestamp, std::size_t> first;
        for (std::size_t i = 0; i < t.timestamps.size(); ++i) first.emplace(t.timestamps[i], i);
        if (first.empty()) continue;
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& [ts, i] : first) {
            lo = std::min({lo, t.lower[i], t.actual[i]});
            hi = std::max({hi, t.upper[i], t.actual[i]});
        }
        if (!(hi > lo)) hi = lo + 1.0;
        const double top = margin + static_cast<double>(p) * (panel + margin);
        const double t0 = static_cast<double>(first.begin()->first);
        const double t1 = std::max(t0 + 1.0, static_cast<double>(first.rbegin()->first));
        const auto x = [&](core::Timestamp ts) {
            return margin + (static_cast<double>(ts) - t0) / (t1 - t0) * (width - 2 * margin);
        };
        const auto y = [&](double v) { return top + panel - (v - lo) / (hi - lo) * panel; };

        svg << "<text x=\"" << margin << "\" y=\"" << top - 8 << "\">" << a.name << " (" << a.kind << ", "
            << a.interval_method << ", alpha " << alpha_label(t.alpha) << ")</text>\n";
        svg << "<rect x=\"" << margin << "\" y=\"" << top << "\" width=\"" << width - 2 * margin << "\" height=\""
            << panel << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
        for (const auto& w : report.golden) {
            if (w.b >= report.timestamps.size()) continue;
            const auto e = std::min(w.e, report.timestamps.size() - 1);
            svg << "<rect x=\"" << x(report.timestamps[w.b]) << "\" y=\"" << top << "\" width=\""
                << std::max(1.0, x(report.timestamps[e]) - x(report.timestamps[w.b])) << "\" height=\"" << panel
                << "\" fill=\"#fdd\"/>\n";
        }
        svg << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.6\" points=\"";
        for (const auto& [ts, i] : first) svg << x(ts) << ',' << y(t.upper[i]) << ' ';
        for (auto it = first.rbegin(); it != first.rend(); ++it) svg << x(it->first) << ',' << y(t.lower[it->second]) << ' ';
        svg << "\"/>\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.8\" points=\"";
        for (const auto& [ts, i] : first) svg << x(ts) << ',' << y(t.actual[i]) << ' ';
        svg << "\"/>\n<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"0.8\" points=\"";
        for (std::size_t i = 0; i < a.forecast.size(); ++i)
            svg << x(a.forecast_timestamps[i]) << ',' << y(std::clamp(a.forecast[i], lo, hi)) << ' ';
        svg << "\"/>\n";
        for (const auto& d : a.detections) {
            if (d.verdict != anomaly::Verdict::anomalous || d.index >= report.timestamps.size()) continue;
            const auto it = first.find(report.timestamps[d.index]);
            if (it == first.end()) continue;
            svg << "<circle cx=\"" << x(it->first) << "\" cy=\"" << y(t.actual[it->second])
                << "\" r=\"3\" fill=\"red\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace sentinel::harness
