#include "sentinel/anomaly/injection.hpp"

#include "sentinel/core/csv.hpp"
#include "sentinel/error.hpp"
#include "sentinel/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace sentinel::anomaly {

std::string to_string(AnomalyKind kind) {
    switch (kind) {
        case AnomalyKind::changepoint: return "changepoint";
        case AnomalyKind::collective: return "collective";
        case AnomalyKind::contextual: return "contextual";
    }
    return "unknown";
}

AnomalyKind anomaly_kind_from_string(const std::string& name) {
    for (auto k : {AnomalyKind::changepoint, AnomalyKind::collective, AnomalyKind::contextual})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown anomaly kind '" + name + "'");
}

void InjectionSpec::validate() const {
    if (!(contamination > 0.0 && contamination <= 0.1)) throw ArgumentError("contamination must lie in (0, 0.1]");
    if (kind == AnomalyKind::collective && run_length < 2)
        throw ArgumentError("collective anomalies need run_length >= 2");
    if (kind == AnomalyKind::changepoint && season_length == 0)
        throw ArgumentError("changepoint anomalies need season_length >= 1");
    if (!(magnitude_sigmas >= 0.0)) throw ArgumentError("magnitude_sigmas must be non-negative");
}

namespace {

struct Region {
    std::size_t begin;
    std::size_t length;
};

// Lengths of the regions that together cover `total` points.
std::vector<std::size_t> region_lengths(const InjectionSpec& spec, std::size_t total) {
    switch (spec.kind) {
        case AnomalyKind::changepoint: return {total};
        case AnomalyKind::contextual: return std::vector<std::size_t>(total, 1);
        case AnomalyKind::collective: {
            const std::size_t runs = std::max<std::size_t>(1, total / spec.run_length);
            std::vector<std::size_t> lengths(runs, total / runs);
            for (std::size_t k = 0; k < total % runs; ++k) ++lengths[k];
            return lengths;
        }
    }
    return {};
}

}  // namespace

InjectionResult inject_anomalies(const core::MultivariateSeries& series, const InjectionSpec& spec,
                                 const std::vector<AnomalyWindow>& occupied) {
    spec.validate();
    const std::size_t n = series.n_steps();
    const auto total = static_cast<std::size_t>(std::llround(spec.contamination * static_cast<double>(n)));
    if (total < 1)
        throw ArgumentError("contamination " + std::to_string(spec.contamination) + " affects no points of a " +
                            std::to_string(n) + "-step series");
    const Eigen::VectorXd target = series.target();
    const double mean = target.mean();
    const double sd = std::sqrt((target.array() - mean).square().mean());
    const double offset = spec.magnitude_sigmas * sd;

    // blocked[i]: row i may not be touched (existing windows and their gaps).
    std::vector<bool> blocked(n, false);
    const auto block = [&](std::size_t b, std::size_t e) {
        const std::size_t lo = b >= spec.min_gap ? b - spec.min_gap : 0;
        const std::size_t hi = std::min(n - 1, e + spec.min_gap);
        for (std::size_t i = lo; i <= hi; ++i) blocked[i] = true;
    };
    for (const auto& w : occupied) block(w.b, std::min(w.e, n - 1));

    auto rng = make_rng(spec.seed);
    auto lengths = region_lengths(spec, total);
    std::vector<Region> regions;
    for (std::size_t len : lengths) {
        // Onsets must leave room for a non-degenerate label window: onset + 1 < n.
        if (len + 1 > n) throw ArgumentError("anomaly region longer than the series");
        std::uniform_int_distribution<std::size_t> pick(0, n - len - 1);
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            const std::size_t start = pick(rng);
            bool free = true;
            for (std::size_t i = start; i < start + len && free; ++i) free = !blocked[i];
            if (!free) continue;
            regions.push_back({start, len});
            block(start, start + len - 1);
            placed = true;
        }
        if (!placed) throw ArgumentError("could not place " + std::to_string(lengths.size()) + " " +
                                         to_string(spec.kind) + " anomalies without overlap");
    }
    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) { return a.begin < b.begin; });

    InjectionResult out;
    Eigen::VectorXd injected = target;
    std::size_t next_id = 0;
    for (const auto& w : occupied) next_id = std::max(next_id, w.id + 1);
    for (const auto& r : regions) {
        for (std::size_t i = r.begin; i < r.begin + r.length; ++i) {
            injected[static_cast<Eigen::Index>(i)] += offset;
            out.affected.push_back(i);
        }
        std::size_t allowance = 1;
        if (spec.kind == AnomalyKind::changepoint) allowance = spec.season_length;
        if (spec.kind == AnomalyKind::collective) allowance = r.length;
        out.labels.push_back({next_id++, r.begin, std::min(n - 1, r.begin + allowance), spec.kind});
    }
    out.series = series.with_target(injected);
    return out;
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<AnomalyWindow>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "anomaly_id,b,e,kind\n";
    for (const auto& w : labels) out << w.id << ',' << w.b << ',' << w.e << ',' << to_string(w.kind) << '\n';
}

std::vector<AnomalyWindow> read_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || core::split_csv_line(line) != std::vector<std::string>{"anomaly_id", "b", "e", "kind"})
        throw ParseError("line 1: expected header anomaly_id,b,e,kind");
    std::vector<AnomalyWindow> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = core::split_csv_line(line);
        if (cells.size() != 4) throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields");
        try {
            AnomalyWindow w;
            w.id = std::stoull(cells[0]);
            w.b = std::stoull(cells[1]);
            w.e = std::stoull(cells[2]);
            w.kind = anomaly_kind_from_string(cells[3]);
            if (!(w.b < w.e)) throw ParseError("window begin must precede end");
            labels.push_back(w);
        } catch (const std::exception& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return labels;
}

}  // namespace sentinel::anomaly
