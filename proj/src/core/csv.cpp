#include "sentinel/core/csv.hpp"

#include "sentinel/error.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>

namespace sentinel::core {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError("line " + std::to_string(line) + ": column '" + column + "': not a number: '" + cell + "'");
    return v;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

MultivariateSeries read_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("line 1: empty file, expected a header row");
    ++line_no;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
    const auto header = split_csv_line(line);

    std::map<std::string, std::size_t> column_of;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!column_of.emplace(header[i], i).second)
            throw SchemaError("duplicate header column '" + header[i] + "'");
    }
    std::set<std::string> declared{schema.timestamp_column};
    for (const auto& f : schema.features) declared.insert(f.name);
    for (const auto& name : declared)
        if (!column_of.count(name)) throw SchemaError("header is missing column '" + name + "'");
    for (const auto& h : header)
        if (!declared.count(h)) throw SchemaError("header has undeclared column '" + h + "'");

    std::vector<std::string> numeric_names;
    std::vector<std::size_t> numeric_cols;
    std::vector<CategoricalColumn> categorical;
    std::vector<std::size_t> categorical_cols;
    for (const auto& f : schema.features) {
        if (f.type == FeatureType::numeric) {
            numeric_names.push_back(f.name);
            numeric_cols.push_back(column_of.at(f.name));
        } else if (f.type == FeatureType::categorical) {
            categorical.push_back({f.name, {}});
            categorical_cols.push_back(column_of.at(f.name));
        }
    }
    std::size_t target_index = 0;
    if (!schema.target.empty()) {
        bool found = false;
        for (std::size_t i = 0; i < numeric_names.size(); ++i)
            if (numeric_names[i] == schema.target) {
                target_index = i;
                found = true;
            }
        if (!found) throw SchemaError("target '" + schema.target + "' is not a numeric feature");
    }
    const std::size_t ts_col = column_of.at(schema.timestamp_column);

    std::vector<Timestamp> timestamps;
    std::vector<double> flat;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(cells.size()));
        bool has_na = false;
        for (const auto& c : cells) has_na = has_na || c == "NA";
        if (has_na && schema.na_policy == NaPolicy::drop_row) continue;

        Timestamp ts = 0;
        try {
            ts = parse_iso8601(cells[ts_col]);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!timestamps.empty() && ts <= timestamps.back())
            throw StructuralError("line " + std::to_string(line_no) + ": timestamp " + cells[ts_col] +
                                  " is out of order");
        timestamps.push_back(ts);
        for (std::size_t k = 0; k < numeric_cols.size(); ++k) {
            const auto& cell = cells[numeric_cols[k]];
            flat.push_back(cell.empty() || cell == "NA" ? kMissing : parse_number(cell, line_no, numeric_names[k]));
        }
        for (std::size_t k = 0; k < categorical_cols.size(); ++k) {
            const auto& cell = cells[categorical_cols[k]];
            categorical[k].values.push_back(cell == "NA" ? std::string{} : cell);
        }
    }

    const auto rows = static_cast<Eigen::Index>(timestamps.size());
    const auto cols = static_cast<Eigen::Index>(numeric_names.size());
    Eigen::MatrixXd values(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) values(r, c) = flat[static_cast<std::size_t>(r * cols + c)];

    std::int64_t step = 1;
    if (schema.step_seconds) {
        step = *schema.step_seconds;
    } else if (timestamps.size() >= 2) {
        step = timestamps[1] - timestamps[0];
    }
    return MultivariateSeries(std::move(timestamps), std::move(values), std::move(numeric_names), target_index, step,
                              std::move(categorical));
}

MultivariateSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_csv(in, schema);
}

std::string format_double(double v) {
    if (is_missing(v)) return {};
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const MultivariateSeries& series,
               const std::string& timestamp_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << timestamp_column;
    for (const auto& n : series.feature_names()) out << ',' << n;
    for (const auto& c : series.categorical()) out << ',' << c.name;
    out << '\n';
    const auto& v = series.values();
    for (std::size_t r = 0; r < series.n_steps(); ++r) {
        out << format_iso8601(series.timestamps()[r]);
        for (Eigen::Index c = 0; c < v.cols(); ++c) out << ',' << format_double(v(static_cast<Eigen::Index>(r), c));
        for (const auto& c : series.categorical()) out << ',' << c.values[r];
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace sentinel::core
